import math
import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from evdfit import _pykernels, kernels

try:
    from evdfit import _ckernels
except ImportError:  # extension not built
    _ckernels = None

BACKENDS = [_pykernels] + ([_ckernels] if _ckernels is not None else [])


def brute(v, w, t):
    import mpmath as mp

    mp.mp.dps = 50
    terms = [mp.mpf(wi) * mp.e ** (mp.mpf(t) * mp.mpf(vi)) for vi, wi in zip(v, w) if wi > 0]
    s = mp.fsum(terms)
    sv = mp.fsum(term * mp.mpf(vi) for term, vi in zip(terms, [vi for vi, wi in zip(v, w) if wi > 0]))
    return float(mp.log(s)), float(sv / s)


@pytest.mark.parametrize("impl", BACKENDS, ids=lambda m: m.__name__.rsplit(".", 1)[-1])
class TestWeightedLseMean:
    def test_matches_high_precision(self, impl):
        v = np.array([-1.6608, -0.2485, -0.0409, 0.27, 1.0224, 1.5789, 1.8718, 1.9947])
        w = np.array([1, 1, 4, 1, 4, 1, 1, 6], dtype=float)
        for t in (-3.0, -0.1, 0.5, 1 / 1.0264, 40.0):
            lse, mean = impl.weighted_lse_mean(v, w, t)
            exp_lse, exp_mean = brute(v, w, t)
            assert lse == pytest.approx(exp_lse, rel=1e-13, abs=1e-13)
            assert mean == pytest.approx(exp_mean, rel=1e-12, abs=1e-13)

    def test_no_overflow_at_extreme_exponents(self, impl):
        v = np.array([0.0, 1.0])
        w = np.ones(2)
        lse, mean = impl.weighted_lse_mean(v, w, 1e12)
        assert lse == pytest.approx(1e12) and mean == 1.0
        lse, mean = impl.weighted_lse_mean(v, w, -1e12)
        assert lse == pytest.approx(0.0) and mean == 0.0

    def test_zero_weights_skipped(self, impl):
        v = np.array([0.0, 1000.0, 2.0])
        w = np.array([1.0, 0.0, 1.0])
        lse, mean = impl.weighted_lse_mean(v, w, 1.0)
        assert mean == pytest.approx(2.0 / (1 + math.exp(-2.0)) , rel=1e-14)

    def test_errors(self, impl):
        with pytest.raises(ValueError):
            impl.weighted_lse_mean(np.zeros(2), np.zeros(2), 1.0)
        with pytest.raises(ValueError):
            impl.weighted_lse_mean(np.zeros(2), np.ones(3), 1.0)


@pytest.mark.skipif(_ckernels is None, reason="compiled kernels not built")
@settings(max_examples=300, deadline=None)
@given(
    st.lists(st.floats(-100, 100), min_size=1, max_size=40),
    st.floats(-50, 50),
    st.integers(0, 2**32 - 1),
)
def test_backends_agree(values, t, seed):
    v = np.array(values)
    w = np.random.default_rng(seed).integers(0, 4, size=v.size).astype(float)
    w[0] = 1.0
    a = _ckernels.weighted_lse_mean(v, w, t)
    b = _pykernels.weighted_lse_mean(v, w, t)
    assert a[0] == pytest.approx(b[0], rel=1e-12, abs=1e-12)
    assert a[1] == pytest.approx(b[1], rel=1e-10, abs=1e-10)


def test_backend_reported():
    assert kernels.BACKEND in ("cython", "python")
    if _ckernels is not None and os.environ.get("EVDFIT_PURE_PYTHON", "") in ("", "0"):
        assert kernels.BACKEND == "cython"


def test_pure_python_switch():
    env = dict(os.environ, EVDFIT_PURE_PYTHON="1")
    out = subprocess.run(
        [sys.executable, "-c", "import evdfit.kernels as k; print(k.BACKEND)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "python"


def test_fits_identical_across_backends(monkeypatch, table2):
    from evdfit.estimators import fit

    ref = fit(table2, "lev")
    monkeypatch.setattr(kernels, "weighted_lse_mean", _pykernels.weighted_lse_mean)
    alt = fit(table2, "lev")
    assert alt.estimate == pytest.approx(ref.estimate, abs=1e-12)
    assert alt.iterations == ref.iterations
