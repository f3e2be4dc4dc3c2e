"""Fixed-point maps for the scale (or shape) parameter and the closed-form
back-substitution of the remaining parameter.

Every regime reduces to a weighted set of support points ``v`` with weights
``w`` plus the mean over the ``r`` observed values:

=============  =======================================  ========================
regime         support points ``v``                     weights ``w``
=============  =======================================  ========================
complete       ``x_(1..n)``                             1
type2 / type1  ``x_(1..r)`` and the censor point ``c``  1 each, ``n - r`` at ``c``
progressive    ``x_(1..r)``                             ``R_i + 1``
=============  =======================================  ========================

with ``c = x_(r)`` for Type-II and ``c = T`` for Type-I censoring.  Then, for
the least-extremes (LEV) family::

    g(sigma) = sum w v e^{v/sigma} / sum w e^{v/sigma} - mean(x_obs)
    mu       = sigma * ln[(1/r) sum w e^{v/sigma}]

for the Gumbel (complete data)::

    g(sigma) = mean(x) - sum x e^{-x/sigma} / sum e^{-x/sigma}
    mu       = sigma * ln[n / sum e^{-x/sigma}]

and for the Weibull::

    1/g(beta) = sum w v^beta ln v / sum w v^beta - mean(ln x_obs)
    theta     = [(1/r) sum w v^beta]^{1/beta}

All maps are evaluated on values centred at the observed mean (or mean log),
with the exponentials shifted by their maximum, so nothing overflows for any
positive argument.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import kernels
from .errors import (
    ConvergenceError,
    DegenerateSampleError,
    DomainError,
    NoFixedPointError,
    SampleTooSmallError,
    UnsupportedRegimeError,
)
from .model import (
    CensoredSample,
    GumbelParams,
    LevParams,
    ProgressiveSample,
    Sample,
    WeibullParams,
    loglik,
    negate_transform,
    regime_of,
)
from .solver import SolverConfig, SolverResult, fixed_point_solve, newton_raphson_solve

_SQRT6_PI = math.sqrt(6.0) / math.pi
_MAX_DOUBLINGS = 200


def _support(data):
    """Support points, weights and observed values of a right-censored regime."""
    obs = np.asarray(data.observed, dtype=float)
    if isinstance(data, Sample):
        return obs, np.ones_like(obs), obs
    if isinstance(data, ProgressiveSample):
        return obs, data.removals.astype(float) + 1.0, obs
    if isinstance(data, CensoredSample):
        if data.side != "right":
            raise UnsupportedRegimeError("maps are defined for right-censored data; negate first")
        k = data.n - data.r
        v = np.append(obs, data.censor_point)
        w = np.append(np.ones_like(obs), float(k))
        return v, w, obs
    raise TypeError(f"not a sample: {type(data).__name__}")


def _check_size(data):
    if data.r < 2:
        raise SampleTooSmallError(f"fitting needs at least 2 observations, got {data.r}")


@dataclass(frozen=True)
class IterationMap:
    """A scalar map ``t -> g(t)`` whose positive fixed point is the MLE.

    ``residual`` has the sign of ``t - g(t)``, is continuous on ``(0, inf)``
    and changes sign exactly once.  ``lower``/``upper`` are closed-form bounds on the fixed
    point (``0``/``inf`` when none is known).  ``secondary`` maps the fixed
    point to the other parameter.
    """

    eval: Callable[[float], float]
    residual: Callable[[float], float]
    secondary: Callable[[float], float]
    family: str
    regime: str
    parameter: str
    initial: float
    lower: float = 0.0
    upper: float = math.inf

    def __call__(self, t):
        return self.eval(t)

    def bracket(self, guess=None):
        return sigma_bracket(self, guess)


# --- Gumbel, complete data -----------------------------------------------


def _gumbel_parts(s: Sample):
    x = np.ascontiguousarray(s.values, dtype=float)
    m = float(x.mean())
    xc = np.ascontiguousarray(x - m)
    w = np.ones_like(xc)
    lse = kernels.weighted_lse_mean

    def g(sigma):
        return -lse(xc, w, -1.0 / sigma)[1]

    def mu(sigma):
        return m - sigma * (lse(xc, w, -1.0 / sigma)[0] - math.log(xc.size))

    return g, mu, m - float(x[0])


def g_gumbel_complete(sigma: float, s: Sample) -> float:
    """Fixed-point map for the Gumbel scale on a complete sample."""
    return _gumbel_parts(s)[0](sigma)


def mu_gumbel_complete(sigma: float, s: Sample) -> float:
    return _gumbel_parts(s)[1](sigma)


def gumbel_complete_map(s: Sample) -> IterationMap:
    _check_size(s)
    g, mu, upper = _gumbel_parts(s)
    if upper <= 0:
        raise DegenerateSampleError("all observations are equal")
    return IterationMap(
        eval=g,
        residual=lambda t: t - g(t),
        secondary=mu,
        family="gumbel",
        regime="complete",
        parameter="sigma",
        initial=_sqrt6_sd(s.values),
        upper=upper,
    )


# --- LEV, all right-censored regimes ----------------------------------------


def _lev_parts(data):
    v, w, obs = _support(data)
    m = float(obs.mean())
    vc = np.ascontiguousarray(v - m)
    w = np.ascontiguousarray(w)
    r = obs.size
    lse = kernels.weighted_lse_mean

    def g(sigma):
        return lse(vc, w, 1.0 / sigma)[1]

    def mu(sigma):
        return m + sigma * (lse(vc, w, 1.0 / sigma)[0] - math.log(r))

    # g(0+) is the largest support point with positive weight, minus the mean
    upper = float(vc[w > 0].max())
    return g, mu, upper


def g_lev_type2(sigma: float, c: CensoredSample) -> float:
    """LEV scale map for singly right-censored data (Type II or Type I)."""
    if not isinstance(c, CensoredSample):
        raise TypeError("expected a CensoredSample")
    return _lev_parts(c)[0](sigma)


def mu_lev_type2(sigma: float, c: CensoredSample) -> float:
    if not isinstance(c, CensoredSample):
        raise TypeError("expected a CensoredSample")
    return _lev_parts(c)[1](sigma)


def g_lev_progressive(sigma: float, p: ProgressiveSample) -> float:
    """LEV scale map for progressively Type-II censored data."""
    return _lev_parts(p)[0](sigma)


def mu_lev_progressive(sigma: float, p: ProgressiveSample) -> float:
    return _lev_parts(p)[1](sigma)


def g_lev_complete(sigma: float, s: Sample) -> float:
    return _lev_parts(s)[0](sigma)


def mu_lev_complete(sigma: float, s: Sample) -> float:
    return _lev_parts(s)[1](sigma)


def lev_map(data) -> IterationMap:
    _check_size(data)
    g, mu, upper = _lev_parts(data)
    if upper <= 0:
        raise DegenerateSampleError("no spread among the observations and censoring points")
    return IterationMap(
        eval=g,
        residual=lambda t: t - g(t),
        secondary=mu,
        family="lev",
        regime=regime_of(data),
        parameter="sigma",
        initial=min(_sqrt6_sd(data.observed), upper),
        upper=upper,
    )


# --- Weibull, all right-censored regimes --------------------------------------


def _weibull_parts(data):
    v, w, obs = _support(data)
    if np.any(v <= 0):
        raise DomainError("Weibull data must be strictly positive")
    lobs = np.log(obs)
    m = float(lobs.mean())
    lv = np.ascontiguousarray(np.log(v) - m)
    w = np.ascontiguousarray(w)
    r = obs.size
    lse = kernels.weighted_lse_mean

    def inner(beta):
        return lse(lv, w, beta)[1]

    def g(beta):
        d = inner(beta)
        if d == 0:
            return math.inf
        return 1.0 / d

    def theta(beta):
        return math.exp(m + (lse(lv, w, beta)[0] - math.log(r)) / beta)

    def residual(beta):
        # inner is increasing, so this is increasing where inner > 0 and
        # stays below -1 where inner <= 0: a single upward sign change
        return beta * inner(beta) - 1.0

    top = float(lv[w > 0].max())
    return g, theta, residual, top


def g_weibull_complete(beta: float, s: Sample) -> float:
    """Weibull shape map on a complete sample."""
    return _weibull_parts(s)[0](beta)


def theta_weibull_complete(beta: float, s: Sample) -> float:
    return _weibull_parts(s)[1](beta)


def g_weibull_type2(beta: float, c: CensoredSample) -> float:
    """Weibull shape map for singly right-censored data (Type II or Type I)."""
    if not isinstance(c, CensoredSample):
        raise TypeError("expected a CensoredSample")
    return _weibull_parts(c)[0](beta)


def theta_weibull_type2(beta: float, c: CensoredSample) -> float:
    if not isinstance(c, CensoredSample):
        raise TypeError("expected a CensoredSample")
    return _weibull_parts(c)[1](beta)


def g_weibull_progressive(beta: float, p: ProgressiveSample) -> float:
    return _weibull_parts(p)[0](beta)


def theta_weibull_progressive(beta: float, p: ProgressiveSample) -> float:
    return _weibull_parts(p)[1](beta)


def weibull_map(data) -> IterationMap:
    _check_size(data)
    g, theta, residual, top = _weibull_parts(data)
    if top <= 0:
        raise DegenerateSampleError("no spread among the observations and censoring points")
    return IterationMap(
        eval=g,
        residual=residual,
        secondary=theta,
        family="weibull",
        regime=regime_of(data),
        parameter="beta",
        initial=1.0,
        # g decreases towards 1/top as beta grows, so the fixed point is >= 1/top
        lower=1.0 / top,
    )


def _sqrt6_sd(values):
    values = np.asarray(values, dtype=float)
    if values.size < 2:
        return 1.0
    sd = float(np.std(values, ddof=1))
    return sd * _SQRT6_PI if sd > 0 else 1.0


def build_map(data, family: str) -> IterationMap:
    """Iteration map for ``family`` under the regime of ``data``.

    Left-censored data (the negation image of right-censored data) are only
    meaningful for the Gumbel and are handled by :func:`fit` via negation.
    """
    if family == "gumbel":
        if isinstance(data, Sample):
            return gumbel_complete_map(data)
        raise UnsupportedRegimeError(
            f"Gumbel maps are defined for complete data; got {regime_of(data)} (fit() handles left-censored data)"
        )
    if family == "lev":
        return lev_map(data)
    if family == "weibull":
        return weibull_map(data)
    raise ValueError(f"unknown family {family!r}")


def sigma_bracket(gmap: IterationMap, guess: float | None = None):
    """Interval ``(lo, hi]`` with ``h(lo) < 0 <= h(hi)`` for ``h(t) = t - g(t)``.

    Doubles outward from ``guess``; known closed-form bounds on the fixed
    point cap the search.
    """
    h = gmap.residual
    lower = getattr(gmap, "lower", 0.0)
    upper = getattr(gmap, "upper", math.inf)
    t = guess if guess is not None else getattr(gmap, "initial", 1.0)
    if not (t > 0 and math.isfinite(t)):
        t = 1.0
    if math.isfinite(upper):
        t = min(t, upper)
    t = max(t, lower) if lower > 0 else t
    ht = h(t)
    if ht < 0:
        lo = t
        for _ in range(_MAX_DOUBLINGS):
            t = 2.0 * t
            if t >= upper:
                return lo, upper
            if h(t) >= 0:
                return lo, t
            lo = t
    else:
        hi = t
        for _ in range(_MAX_DOUBLINGS):
            t = 0.5 * t
            if t <= 0:
                break
            if h(t) < 0:
                return t, hi
            hi = t
    raise NoFixedPointError("no sign change of t - g(t) found; is the sample degenerate?")


# --- fitting ------------------------------------------------------------------


@dataclass
class FitReport:
    family: str
    regime: str
    parameter: str
    estimate: float
    secondary_name: str
    secondary: float
    solver: SolverResult
    loglik: float
    method: str = "fixed-point"
    elapsed: float = field(default=0.0, compare=False)

    @property
    def params(self):
        if self.family == "weibull":
            return WeibullParams(theta=self.secondary, beta=self.estimate)
        cls = GumbelParams if self.family == "gumbel" else LevParams
        return cls(mu=self.secondary, sigma=self.estimate)

    @property
    def estimates(self) -> dict:
        return {self.parameter: self.estimate, self.secondary_name: self.secondary}

    @property
    def iterations(self) -> int:
        return self.solver.iterations


_SOLVERS = {"fixed-point": fixed_point_solve, "newton": newton_raphson_solve}


def fit(data, family: str, config: SolverConfig | None = None, method: str = "fixed-point") -> FitReport:
    """Maximum likelihood fit of ``family`` to ``data``.

    Supported combinations: ``gumbel`` with complete or left-censored data,
    ``lev`` and ``weibull`` with complete, Type-I, Type-II or progressive
    right-censored data.  ``method`` is ``"fixed-point"`` or ``"newton"``.
    """
    if method not in _SOLVERS:
        raise ValueError(f"unknown method {method!r}")
    config = config or SolverConfig()
    t0 = time.perf_counter()
    if isinstance(data, CensoredSample) and data.side == "left":
        if family != "gumbel":
            raise UnsupportedRegimeError("left-censored data can only be fitted with the Gumbel family")
        mirror = fit(negate_transform(data), "lev", config, method)
        mu = -mirror.secondary
        sigma = mirror.estimate
        return FitReport(
            family="gumbel",
            regime=mirror.regime,
            parameter="sigma",
            estimate=sigma,
            secondary_name="mu",
            secondary=mu,
            solver=mirror.solver,
            loglik=loglik(data, "gumbel", GumbelParams(mu, sigma)),
            method=method,
            elapsed=time.perf_counter() - t0,
        )
    gmap = build_map(data, family)
    result = _SOLVERS[method](gmap, config)
    if not result.converged:
        raise ConvergenceError(
            f"{method} stopped after {result.iterations} iterations without converging", result
        )
    est = result.estimate
    sec = gmap.secondary(est)
    report = FitReport(
        family=family,
        regime=gmap.regime,
        parameter=gmap.parameter,
        estimate=est,
        secondary_name="theta" if family == "weibull" else "mu",
        secondary=sec,
        solver=result,
        loglik=0.0,
        method=method,
    )
    report.loglik = loglik(data, family, report.params)
    report.elapsed = time.perf_counter() - t0
    return report
