"""Distribution definitions, data containers and log-likelihoods.

Three families are covered:

* ``gumbel``  -- Type I extreme value distribution of maxima,
  ``F(x) = exp(-exp(-(x - mu) / sigma))``.
* ``lev``     -- Type I extreme value distribution of minima (the image of the
  Gumbel under ``x -> -x``), ``F(x) = 1 - exp(-exp((x - mu) / sigma))``.
* ``weibull`` -- two-parameter Weibull, ``F(x) = 1 - exp(-(x / theta)**beta)``.

If ``Y`` is Weibull(theta, beta) then ``ln Y`` is LEV(ln theta, 1 / beta).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .errors import DomainError

FAMILIES = ("gumbel", "lev", "weibull")


def _positive(name, value):
    if not (math.isfinite(value) and value > 0):
        raise DomainError(f"{name} must be finite and > 0, got {value!r}")


def _finite(name, value):
    if not math.isfinite(value):
        raise DomainError(f"{name} must be finite, got {value!r}")


@dataclass(frozen=True)
class GumbelParams:
    mu: float
    sigma: float

    def __post_init__(self):
        _finite("mu", self.mu)
        _positive("sigma", self.sigma)


@dataclass(frozen=True)
class LevParams:
    mu: float
    sigma: float

    def __post_init__(self):
        _finite("mu", self.mu)
        _positive("sigma", self.sigma)


@dataclass(frozen=True)
class WeibullParams:
    theta: float
    beta: float

    def __post_init__(self):
        _positive("theta", self.theta)
        _positive("beta", self.beta)


Params = Union[GumbelParams, LevParams, WeibullParams]

_PARAM_TYPES = {"gumbel": GumbelParams, "lev": LevParams, "weibull": WeibullParams}


def _frozen_sorted(values, name="values"):
    arr = np.array(values, dtype=float).ravel()
    if arr.size == 0:
        raise DomainError(f"{name} must not be empty")
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} must be finite")
    arr = np.sort(arr)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Sample:
    """A complete sample, sorted ascending at construction.

    A single observation is accepted so the likelihood can be evaluated, but
    every fitting routine requires at least two.
    """

    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", _frozen_sorted(self.values))

    @property
    def n(self) -> int:
        return int(self.values.size)

    @property
    def r(self) -> int:
        return self.n

    @property
    def observed(self) -> np.ndarray:
        return self.values

    def __eq__(self, other):
        return isinstance(other, Sample) and np.array_equal(self.values, other.values)

    def __len__(self):
        return self.n


@dataclass(frozen=True, eq=False)
class CensoredSample:
    """A singly censored sample.

    ``mode`` is ``"type2"`` (test stopped at the r-th failure) or ``"type1"``
    (test stopped at the pre-set time ``censor_time``).  ``side="right"`` is
    the usual life-test layout; ``side="left"`` only arises as the negation
    image of right-censored data.  ``r == n`` is accepted: the censoring terms
    then carry a zero count.
    """

    observed: np.ndarray
    n: int
    mode: str = "type2"
    censor_time: float | None = None
    side: str = "right"

    def __post_init__(self):
        obs = _frozen_sorted(self.observed, "observed")
        object.__setattr__(self, "observed", obs)
        object.__setattr__(self, "n", int(self.n))
        r = obs.size
        if self.mode not in ("type1", "type2"):
            raise DomainError(f"unknown censoring mode {self.mode!r}")
        if self.side not in ("right", "left"):
            raise DomainError(f"unknown censoring side {self.side!r}")
        if not 1 < r <= self.n:
            raise DomainError(f"need 1 < r <= n, got r={r}, n={self.n}")
        if self.mode == "type1":
            if self.censor_time is None:
                raise DomainError("type1 censoring requires censor_time")
            t = float(self.censor_time)
            _finite("censor_time", t)
            object.__setattr__(self, "censor_time", t)
            if self.side == "right" and t < obs[-1]:
                raise DomainError("censor_time is below the largest observation")
            if self.side == "left" and t > obs[0]:
                raise DomainError("censor_time is above the smallest observation")
        elif self.censor_time is not None:
            raise DomainError("censor_time is only meaningful for type1 censoring")

    @property
    def r(self) -> int:
        return int(self.observed.size)

    @property
    def censor_point(self) -> float:
        """Value at which the n - r unobserved items are censored."""
        if self.mode == "type1":
            return self.censor_time
        return float(self.observed[-1] if self.side == "right" else self.observed[0])

    def __eq__(self, other):
        return (
            isinstance(other, CensoredSample)
            and np.array_equal(self.observed, other.observed)
            and (self.n, self.mode, self.censor_time, self.side)
            == (other.n, other.mode, other.censor_time, other.side)
        )


@dataclass(frozen=True, eq=False)
class ProgressiveSample:
    """Progressively Type-II right-censored sample.

    ``removals[i]`` survivors are withdrawn at the i-th observed failure.
    """

    observed: np.ndarray
    removals: np.ndarray
    n: int = field(default=-1)

    def __post_init__(self):
        obs = np.array(self.observed, dtype=float).ravel()
        rem = np.array(self.removals).ravel()
        if obs.size != rem.size:
            raise DomainError("observed and removals differ in length")
        if obs.size == 0:
            raise DomainError("observed must not be empty")
        if not np.all(np.isfinite(obs)):
            raise DomainError("observed must be finite")
        if rem.dtype.kind == "f":
            if not np.all(rem == np.round(rem)):
                raise DomainError("removals must be integers")
        rem = rem.astype(np.int64)
        if np.any(rem < 0):
            raise DomainError("removals must be non-negative")
        if np.any(np.diff(obs) < 0):
            order = np.argsort(obs, kind="stable")
            obs, rem = obs[order], rem[order]
        obs.setflags(write=False)
        rem.setflags(write=False)
        object.__setattr__(self, "observed", obs)
        object.__setattr__(self, "removals", rem)
        total = int(obs.size + rem.sum())
        if self.n == -1:
            object.__setattr__(self, "n", total)
        elif int(self.n) != total:
            raise DomainError(f"n={self.n} but r + sum(R) = {total}")

    @property
    def r(self) -> int:
        return int(self.observed.size)

    def __eq__(self, other):
        return (
            isinstance(other, ProgressiveSample)
            and np.array_equal(self.observed, other.observed)
            and np.array_equal(self.removals, other.removals)
        )


Data = Union[Sample, CensoredSample, ProgressiveSample]


def regime_of(data) -> str:
    """Short regime tag: ``complete``, ``type1``, ``type2`` or ``progressive``."""
    if isinstance(data, Sample):
        return "complete"
    if isinstance(data, CensoredSample):
        return data.mode
    if isinstance(data, ProgressiveSample):
        return "progressive"
    raise TypeError(f"not a sample: {type(data).__name__}")


# --- densities ------------------------------------------------------------


def gumbel_logpdf(x, p: GumbelParams):
    z = (np.asarray(x, dtype=float) - p.mu) / p.sigma
    with np.errstate(over="ignore"):
        out = -math.log(p.sigma) - z - np.exp(-z)
    return float(out) if np.ndim(out) == 0 else out


def lev_logpdf(x, p: LevParams):
    z = (np.asarray(x, dtype=float) - p.mu) / p.sigma
    with np.errstate(over="ignore"):
        out = -math.log(p.sigma) + z - np.exp(z)
    return float(out) if np.ndim(out) == 0 else out


def weibull_logpdf(x, p: WeibullParams):
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise DomainError("Weibull density needs x > 0")
    lx = np.log(x)
    lt = math.log(p.theta)
    with np.errstate(over="ignore"):
        out = math.log(p.beta) - p.beta * lt + (p.beta - 1.0) * lx - np.exp(p.beta * (lx - lt))
    return float(out) if np.ndim(out) == 0 else out


# log S(x) = ln(1 - F(x)) and log F(x), in cancellation-free forms


def _logsf(family, x, p):
    x = np.asarray(x, dtype=float)
    if family == "lev":
        return -np.exp((x - p.mu) / p.sigma)
    if family == "gumbel":
        return np.log(-np.expm1(-np.exp(-(x - p.mu) / p.sigma)))
    return -np.exp(p.beta * (np.log(x) - math.log(p.theta)))


def _logcdf(family, x, p):
    x = np.asarray(x, dtype=float)
    if family == "gumbel":
        return -np.exp(-(x - p.mu) / p.sigma)
    if family == "lev":
        return np.log(-np.expm1(-np.exp((x - p.mu) / p.sigma)))
    return np.log(-np.expm1(-np.exp(p.beta * (np.log(x) - math.log(p.theta)))))


_LOGPDF = {"gumbel": gumbel_logpdf, "lev": lev_logpdf, "weibull": weibull_logpdf}


def logpdf(family, x, p):
    return _LOGPDF[family](x, p)


def cdf(family, x, p):
    """Distribution function of ``family`` at ``x``."""
    check_params(family, p)
    x = np.asarray(x, dtype=float)
    if family == "gumbel":
        out = np.exp(-np.exp(-(x - p.mu) / p.sigma))
    elif family == "lev":
        out = -np.expm1(-np.exp((x - p.mu) / p.sigma))
    else:
        with np.errstate(divide="ignore"):
            out = -np.expm1(-np.exp(p.beta * (np.log(np.maximum(x, 0.0)) - math.log(p.theta))))
    return float(out) if np.ndim(out) == 0 else out


def check_params(family, params):
    if family not in _PARAM_TYPES:
        raise ValueError(f"unknown family {family!r}")
    if not isinstance(params, _PARAM_TYPES[family]):
        raise TypeError(f"{family} needs {_PARAM_TYPES[family].__name__}, got {type(params).__name__}")


def _check_weibull_support(data):
    vals = data.observed
    if np.any(vals <= 0):
        raise DomainError("Weibull data must be strictly positive")
    if isinstance(data, CensoredSample) and data.mode == "type1" and data.censor_time <= 0:
        raise DomainError("Weibull censor_time must be strictly positive")


def loglik(data: Data, family: str, params: Params) -> float:
    """Exact log-likelihood of ``params`` given a (possibly censored) sample.

    Censored items contribute ``ln S(c)`` (right) or ``ln F(c)`` (left) at
    their censoring value; progressive removals at ``x_(i)`` contribute
    ``R_i * ln S(x_(i))``.
    """
    check_params(family, params)
    if family == "weibull":
        _check_weibull_support(data)
    dens = _LOGPDF[family](data.observed, params)
    total = math.fsum(np.atleast_1d(dens))
    if isinstance(data, CensoredSample):
        k = data.n - data.r
        if k:
            c = data.censor_point
            term = _logsf(family, c, params) if data.side == "right" else _logcdf(family, c, params)
            total += k * float(term)
    elif isinstance(data, ProgressiveSample):
        mask = data.removals > 0
        if np.any(mask):
            terms = data.removals[mask] * _logsf(family, data.observed[mask], params)
            total += math.fsum(terms)
    return float(total)


# --- transformations ---------------------------------------------------------


def negate_transform(data):
    """Map ``x -> -x``; a right-censored sample becomes left-censored.

    The transform is an involution, and Gumbel(mu, sigma) data map to
    LEV(-mu, sigma) data and back (see :func:`negate_params`).
    """
    if isinstance(data, Sample):
        return Sample(-data.values)
    if isinstance(data, CensoredSample):
        return CensoredSample(
            -data.observed,
            n=data.n,
            mode=data.mode,
            censor_time=None if data.censor_time is None else -data.censor_time,
            side="left" if data.side == "right" else "right",
        )
    raise TypeError(f"cannot negate {type(data).__name__}")


def negate_params(p):
    if isinstance(p, GumbelParams):
        return LevParams(-p.mu, p.sigma)
    if isinstance(p, LevParams):
        return GumbelParams(-p.mu, p.sigma)
    raise TypeError(f"cannot negate {type(p).__name__}")


def log_transform(data):
    """Log of Weibull data: the result is LEV data with the same censoring."""
    if np.any(data.observed <= 0):
        raise DomainError("log transform needs strictly positive data")
    if isinstance(data, Sample):
        return Sample(np.log(data.values))
    if isinstance(data, CensoredSample):
        t = data.censor_time
        if t is not None:
            if t <= 0:
                raise DomainError("log transform needs a positive censor_time")
            t = math.log(t)
        return CensoredSample(np.log(data.observed), n=data.n, mode=data.mode, censor_time=t, side=data.side)
    if isinstance(data, ProgressiveSample):
        return ProgressiveSample(np.log(data.observed), data.removals, n=data.n)
    raise TypeError(f"not a sample: {type(data).__name__}")


def exp_transform(data):
    """Inverse of :func:`log_transform`."""
    if isinstance(data, Sample):
        return Sample(np.exp(data.values))
    if isinstance(data, CensoredSample):
        t = None if data.censor_time is None else math.exp(data.censor_time)
        return CensoredSample(np.exp(data.observed), n=data.n, mode=data.mode, censor_time=t, side=data.side)
    if isinstance(data, ProgressiveSample):
        return ProgressiveSample(np.exp(data.observed), data.removals, n=data.n)
    raise TypeError(f"not a sample: {type(data).__name__}")


def lev_to_weibull(p: LevParams) -> WeibullParams:
    return WeibullParams(theta=math.exp(p.mu), beta=1.0 / p.sigma)


def weibull_to_lev(p: WeibullParams) -> LevParams:
    return LevParams(mu=math.log(p.theta), sigma=1.0 / p.beta)
