"""Brute-force profile-likelihood maximiser used to check the fixed-point fits.

The location (or Weibull scale) is concentrated out by solving its own score
equation, which has a closed form for every family here.  The resulting
one-dimensional profile is scanned on a log-spaced grid and refined by
golden-section search.  Nothing in this module touches the iteration maps,
the solvers or the compiled kernels; it only evaluates the exact likelihood
from :mod:`evdfit.model`.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from .errors import DomainError, OracleError
from .model import (
    CensoredSample,
    GumbelParams,
    LevParams,
    ProgressiveSample,
    Sample,
    WeibullParams,
    loglik,
)

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class OracleResult:
    primary: float
    secondary: float
    loglik: float
    interval: tuple
    grid_points: int
    refinements: int
    widenings: int

    def as_params(self, family):
        if family == "weibull":
            return WeibullParams(theta=self.secondary, beta=self.primary)
        cls = GumbelParams if family == "gumbel" else LevParams
        return cls(mu=self.secondary, sigma=self.primary)


def _censor_terms(data):
    """Observed values, all-point values and their multiplicities."""
    obs = np.asarray(data.observed, dtype=float)
    if isinstance(data, Sample):
        return obs, obs, np.ones_like(obs)
    if isinstance(data, ProgressiveSample):
        return obs, obs, data.removals + 1.0
    if isinstance(data, CensoredSample):
        return obs, np.append(obs, data.censor_point), np.append(np.ones_like(obs), data.n - data.r)
    raise TypeError(f"not a sample: {type(data).__name__}")


def conditional_secondary(data, family, t):
    """Maximiser of the likelihood in the second parameter with ``t`` fixed.

    LEV, right censored: d/dmu = 0 gives r = sum w exp((v - mu)/sigma).
    Gumbel, complete or left censored: r = sum w exp(-(v - mu)/sigma).
    Weibull, right censored: r theta^beta = sum w v^beta.
    """
    obs, v, w = _censor_terms(data)
    keep = w > 0
    v, w = v[keep], w[keep]
    r = obs.size
    if family == "lev":
        if isinstance(data, CensoredSample) and data.side == "left":
            raise DomainError("LEV oracle covers right-censored data only")
        return float(t * (logsumexp(v / t, b=w) - math.log(r)))
    if family == "gumbel":
        if isinstance(data, ProgressiveSample) or (isinstance(data, CensoredSample) and data.side == "right"):
            raise DomainError("Gumbel oracle covers complete or left-censored data only")
        return float(t * (math.log(r) - logsumexp(-v / t, b=w)))
    if family == "weibull":
        if np.any(v <= 0):
            raise DomainError("Weibull data must be strictly positive")
        return math.exp((logsumexp(t * np.log(v), b=w) - math.log(r)) / t)
    raise ValueError(f"unknown family {family!r}")


def _params(family, t, s):
    if family == "weibull":
        return WeibullParams(theta=s, beta=t)
    if family == "gumbel":
        return GumbelParams(mu=s, sigma=t)
    return LevParams(mu=s, sigma=t)


def profile_loglik(data, family, t):
    """Log-likelihood with the second parameter concentrated out."""
    try:
        s = conditional_secondary(data, family, t)
        val = loglik(data, family, _params(family, t, s))
    except DomainError:
        if family == "weibull" and np.any(np.asarray(data.observed) <= 0):
            raise
        return -math.inf
    except (OverflowError, FloatingPointError):
        return -math.inf
    return val if math.isfinite(val) else -math.inf


def grid_scan(data, family, lo, hi, points=64):
    """Profile log-likelihood on ``points`` log-spaced values in ``[lo, hi]``.

    Warns when the scan shows more than one local maximum.
    """
    if not 0 < lo < hi:
        raise ValueError("need 0 < lo < hi")
    if points < 8:
        raise ValueError("need at least 8 grid points")
    grid = np.geomspace(lo, hi, points)
    with np.errstate(over="ignore", under="ignore", invalid="ignore", divide="ignore"):
        vals = [profile_loglik(data, family, float(t)) for t in grid]
    if not any(math.isfinite(v) for v in vals):
        raise DomainError("profile log-likelihood is non-finite on the whole grid")
    if _count_local_maxima(vals) > 1:
        warnings.warn("profile log-likelihood scan is not unimodal", RuntimeWarning, stacklevel=2)
    return list(zip(grid.tolist(), vals))


def _count_local_maxima(vals):
    v = np.asarray(vals)
    # plateaus (e.g. at -inf) are collapsed first
    keep = np.append(True, v[1:] != v[:-1])
    v = v[keep]
    if v.size < 3:
        return 1
    interior = (v[1:-1] > v[:-2]) & (v[1:-1] > v[2:])
    return int(interior.sum() + (v[0] > v[1]) + (v[-1] > v[-2]))


def golden_section_max(f, a, b, width=1e-8, max_iter=400):
    """Maximise a unimodal ``f`` on ``[a, b]``; returns ``(x, f(x), steps)``."""
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    steps = 0
    while b - a > width * max(1.0, abs(a)) and steps < max_iter:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
        steps += 1
    x = 0.5 * (a + b)
    return x, f(x), steps


def default_interval(data, family):
    obs = np.asarray(data.observed, dtype=float)
    if family == "weibull":
        spread = float(np.std(np.log(obs)))
        scale = 1.0 / spread if spread > 0 else 1.0
    else:
        spread = float(np.std(obs))
        scale = spread if spread > 0 else 1.0
    return scale * 1e-2, scale * 1e2


def profile_maximize(data, family, search_interval=None, points=64, width=1e-8, max_widenings=3):
    """Maximise the profile log-likelihood by grid scan + golden section.

    The interval is widened (its log-width doubled) up to ``max_widenings``
    times while the grid maximum sits on an end point.
    """
    lo, hi = search_interval or default_interval(data, family)
    for widening in range(max_widenings + 1):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            scan = grid_scan(data, family, lo, hi, points)
        ts = [t for t, _ in scan]
        vals = [v for _, v in scan]
        k = int(np.argmax(vals))
        if 0 < k < len(ts) - 1:
            f = lambda t: profile_loglik(data, family, t)  # noqa: E731
            with np.errstate(over="ignore", under="ignore", invalid="ignore", divide="ignore"):
                t, val, steps = golden_section_max(f, ts[k - 1], ts[k + 1], width)
            return OracleResult(
                primary=t,
                secondary=float(conditional_secondary(data, family, t)),
                loglik=val,
                interval=(lo, hi),
                grid_points=points,
                refinements=steps,
                widenings=widening,
            )
        stretch = math.sqrt(hi / lo)
        lo, hi = lo / stretch, hi * stretch
    raise OracleError(f"profile maximum stays on the boundary of ({lo}, {hi})")
