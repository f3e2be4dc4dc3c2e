import math

import numpy as np
import pytest
from scipy import stats

from evdfit.errors import DomainError
from evdfit.estimators import fit
from evdfit.model import CensoredSample, GumbelParams, LevParams, ProgressiveSample, WeibullParams, cdf
from evdfit.simulate import (
    NoCensoring,
    ProgressiveCensoring,
    SimConfig,
    Type1Censoring,
    Type2Censoring,
    apply_censoring,
    benchmark_iterations,
    compare_solvers,
    quantile,
    replicate,
    sample,
)
from evdfit.solver import SolverConfig

PARAMS = {
    "gumbel": GumbelParams(1.0, 2.0),
    "lev": LevParams(1.0, 2.0),
    "weibull": WeibullParams(3.0, 1.7),
}
SCIPY = {
    "gumbel": lambda x: stats.gumbel_r.cdf(x, 1.0, 2.0),
    "lev": lambda x: stats.gumbel_l.cdf(x, 1.0, 2.0),
    "weibull": lambda x: stats.weibull_min.cdf(x, 1.7, scale=3.0),
}
# KS statistic of 1e5 draws with seed 123, identical across families since
# all quantile functions are monotone images of the same uniforms
KS_SEED123 = 0.0021374624024335


@pytest.mark.parametrize("family", sorted(PARAMS))
def test_quantile_inverts_cdf(family):
    u = np.linspace(1e-6, 1 - 1e-6, 401)
    q = quantile(family, PARAMS[family], u)
    assert np.allclose(cdf(family, q, PARAMS[family]), u, atol=1e-12, rtol=0)


def test_weibull_quantile_at_characteristic_life():
    assert quantile("weibull", WeibullParams(7.0, 2.5), 1 - math.exp(-1)) == pytest.approx(7.0, rel=1e-14)
    assert quantile("gumbel", GumbelParams(2.0, 3.0), math.exp(-1)) == pytest.approx(2.0, abs=1e-14)
    assert quantile("lev", LevParams(2.0, 3.0), 1 - math.exp(-1)) == pytest.approx(2.0, abs=1e-14)


@pytest.mark.parametrize("family", sorted(PARAMS))
def test_ks_distance(family):
    s = sample(family, PARAMS[family], 100_000, seed=123)
    d = stats.kstest(s.values, SCIPY[family]).statistic
    assert d < 0.006
    assert d == pytest.approx(KS_SEED123, abs=1e-12)


def test_sample_deterministic():
    a = sample("lev", PARAMS["lev"], 50, seed=5).values
    b = sample("lev", PARAMS["lev"], 50, seed=5).values
    c = sample("lev", PARAMS["lev"], 50, seed=6).values
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)


def test_sample_validation():
    with pytest.raises(DomainError):
        sample("gumbel", PARAMS["gumbel"], 0)
    with pytest.raises(TypeError):
        sample("gumbel", PARAMS["weibull"], 5)
    with pytest.raises(ValueError):
        sample("frechet", PARAMS["gumbel"], 5)


class TestCensoring:
    def test_type2(self):
        s = sample("lev", PARAMS["lev"], 10, seed=1)
        c = apply_censoring(s, Type2Censoring(4))
        assert isinstance(c, CensoredSample)
        assert c.r == 4 and c.n == 10
        assert np.array_equal(c.observed, s.values[:4])
        assert apply_censoring(s, Type2Censoring(10)) is s
        with pytest.raises(DomainError):
            apply_censoring(s, Type2Censoring(1))

    def test_type1(self):
        s = sample("weibull", PARAMS["weibull"], 30, seed=2)
        t = float(np.median(s.values))
        c = apply_censoring(s, Type1Censoring(t))
        assert np.all(c.observed <= t) and c.censor_time == t
        assert c.r == int(np.sum(s.values <= t))
        with pytest.raises(DomainError):
            apply_censoring(s, Type1Censoring(-1.0))

    def test_none(self):
        s = sample("gumbel", PARAMS["gumbel"], 5, seed=3)
        assert apply_censoring(s, NoCensoring()) is s

    def test_progressive(self):
        s = sample("lev", PARAMS["lev"], 19, seed=4)
        scheme = ProgressiveCensoring((0, 0, 3, 0, 3, 0, 0, 5))
        p = apply_censoring(s, scheme, seed=9)
        assert isinstance(p, ProgressiveSample)
        assert p.n == 19 and p.r == 8
        assert p.observed[0] == s.values[0]
        assert np.all(np.diff(p.observed) >= 0)
        assert set(p.observed.tolist()) <= set(s.values.tolist())
        again = apply_censoring(s, scheme, seed=9)
        assert np.array_equal(p.observed, again.observed)

    def test_progressive_zero_removals(self):
        s = sample("lev", PARAMS["lev"], 6, seed=4)
        p = apply_censoring(s, ProgressiveCensoring((0,) * 6))
        assert np.array_equal(p.observed, s.values)

    def test_progressive_size_mismatch(self):
        s = sample("lev", PARAMS["lev"], 6, seed=4)
        with pytest.raises(DomainError):
            apply_censoring(s, ProgressiveCensoring((0, 1)))
        with pytest.raises(DomainError):
            ProgressiveCensoring((1, -1))


def test_replicate_depends_on_seed_and_index():
    cfg = SimConfig("lev", PARAMS["lev"], 20, ProgressiveCensoring((2,) * 5 + (0,) * 5), seed=3)
    a, b = replicate(cfg, 0), replicate(cfg, 0)
    assert np.array_equal(a.observed, b.observed)
    assert not np.array_equal(a.observed, replicate(cfg, 1).observed)


def test_simconfig_validation():
    with pytest.raises(DomainError):
        SimConfig("lev", PARAMS["lev"], 10, Type2Censoring(11))
    with pytest.raises(DomainError):
        SimConfig("lev", PARAMS["lev"], 10, ProgressiveCensoring((1, 1)))
    with pytest.raises(DomainError):
        SimConfig("lev", PARAMS["lev"], 1)


def test_benchmark(table2):
    cfg = SimConfig("lev", PARAMS["lev"], 19, ProgressiveCensoring((0, 0, 3, 0, 3, 0, 0, 5)), seed=1, replications=40)
    summ = benchmark_iterations(cfg)
    fp, nr = summ.solvers
    assert fp.runs == nr.runs == 40
    assert fp.failures == nr.failures == 0
    assert fp.median_iterations > nr.median_iterations
    assert summ.max_disagreement < 2e-4
    assert [row["method"] for row in summ.table()] == ["fixed-point", "newton"]


def test_benchmark_counts_unfittable_as_failures():
    # T far in the lower tail leaves fewer than two failures in most replicates
    cfg = SimConfig("weibull", PARAMS["weibull"], 10, Type1Censoring(0.05), seed=0, replications=20)
    summ = benchmark_iterations(cfg, solvers=("fixed-point",))
    (fp,) = summ.solvers
    assert fp.runs == 20
    assert fp.failures > 0
    assert len(fp.iterations) == 20 - fp.failures


def test_compare_solvers(table2):
    summ = compare_solvers(table2, "lev", solver_config=SolverConfig(initial=0.7912))
    fp, nr = summ.solvers
    assert fp.iterations == [11]
    assert nr.iterations[0] < 11


def test_consistency_trend():
    """Mean absolute error of the scale estimate shrinks as n grows."""
    errors = []
    for n in (20, 40, 80):
        cfg = SimConfig("lev", PARAMS["lev"], n, Type2Censoring(int(0.7 * n)), seed=11, replications=60)
        errs = [abs(fit(replicate(cfg, i), "lev").estimate - 2.0) for i in range(cfg.replications)]
        errors.append(float(np.mean(errs)))
    assert errors[0] > errors[1] > errors[2]
    assert errors[2] < 0.25
