import math
import warnings

import numpy as np
import pytest

from evdfit.errors import DomainError, OracleError
from evdfit.estimators import fit
from evdfit.model import CensoredSample, ProgressiveSample, Sample, log_transform, loglik
from evdfit.oracle import (
    conditional_secondary,
    golden_section_max,
    grid_scan,
    profile_loglik,
    profile_maximize,
)
from evdfit.solver import SolverConfig

TIGHT = SolverConfig(tolerance=1e-10)


def test_golden_section_quadratic():
    x, fx, steps = golden_section_max(lambda t: -((t - 0.3) ** 2), 0.0, 1.0, width=1e-10)
    assert x == pytest.approx(0.3, abs=1e-9)
    assert steps > 10


def test_two_point_gumbel():
    res = profile_maximize(Sample([0.0, 1.0]), "gumbel")
    assert res.primary == pytest.approx(0.41677827980048235, abs=1e-7)
    assert res.secondary == pytest.approx(0.25267498128094266, abs=1e-6)


def test_table1(table1):
    res = profile_maximize(table1, "weibull")
    assert res.primary == pytest.approx(1.6467, abs=5e-4)
    assert res.secondary == pytest.approx(162.223, abs=0.05)
    assert res.primary == pytest.approx(fit(table1, "weibull", TIGHT).estimate, abs=1e-6)


def test_table2(table2):
    res = profile_maximize(table2, "lev")
    assert res.primary == pytest.approx(1.0264, abs=5e-4)
    assert res.secondary == pytest.approx(2.222, abs=1e-3)
    assert res.loglik == pytest.approx(loglik(table2, "lev", res.as_params("lev")))


def test_lev_weibull_profiles_agree(table1):
    a = profile_maximize(table1, "weibull")
    b = profile_maximize(log_transform(table1), "lev")
    assert a.primary == pytest.approx(1 / b.primary, rel=1e-6)


def test_conditional_secondary_is_maximiser(table2):
    t = 0.9
    s = conditional_secondary(table2, "lev", t)
    from evdfit.model import LevParams

    base = loglik(table2, "lev", LevParams(s, t))
    for d in (-1e-3, 1e-3):
        assert loglik(table2, "lev", LevParams(s + d, t)) < base


def test_grid_scan_unimodal(table2):
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        scan = grid_scan(table2, "lev", 0.05, 20.0)
    vals = [v for _, v in scan]
    k = int(np.argmax(vals))
    assert np.all(np.diff(vals[: k + 1]) > 0)
    assert np.all(np.diff(vals[k:]) < 0)


def test_grid_scan_warns_on_multimodal(monkeypatch):
    import evdfit.oracle as oracle

    monkeypatch.setattr(oracle, "profile_loglik", lambda d, f, t: math.sin(5 * math.log(t)))
    with pytest.warns(RuntimeWarning):
        grid_scan(Sample([0.0, 1.0]), "lev", 0.01, 100.0)


def test_grid_scan_errors():
    s = Sample([0.0, 1.0])
    with pytest.raises(ValueError):
        grid_scan(s, "lev", 2.0, 1.0)
    with pytest.raises(ValueError):
        grid_scan(s, "lev", 1.0, 2.0, points=4)


def test_boundary_maximum_raises():
    # a narrow interval far above the optimum cannot be widened far enough
    with pytest.raises(OracleError):
        profile_maximize(Sample([0.0, 1.0]), "gumbel", search_interval=(1e3, 1.1e3), max_widenings=1)


def test_widening_recovers(table2):
    res = profile_maximize(table2, "lev", search_interval=(2.0, 8.0), max_widenings=3)
    assert res.widenings >= 1
    assert res.primary == pytest.approx(1.0264, abs=5e-4)


def test_weibull_nonpositive():
    with pytest.raises(DomainError):
        profile_loglik(Sample([-1.0, 2.0]), "weibull", 1.0)


def test_unsupported_combinations(table2):
    with pytest.raises(DomainError):
        conditional_secondary(table2, "gumbel", 1.0)
    with pytest.raises(DomainError):
        conditional_secondary(CensoredSample([1.0, 2.0], n=3, side="left"), "lev", 1.0)


@pytest.mark.parametrize("family", ["gumbel", "lev", "weibull"])
def test_matches_fixed_point(family, rng):
    for _ in range(10):
        x = np.sort(rng.gumbel(size=int(rng.integers(5, 40))))
        data = Sample(np.exp(x) if family == "weibull" else x)
        assert profile_maximize(data, family).primary == pytest.approx(fit(data, family, TIGHT).estimate, abs=1e-5)


def test_progressive_weibull(table2):
    from evdfit.model import exp_transform

    y = exp_transform(table2)
    res = profile_maximize(y, "weibull")
    assert res.primary == pytest.approx(fit(y, "weibull", TIGHT).estimate, abs=1e-6)
    assert isinstance(y, ProgressiveSample)
