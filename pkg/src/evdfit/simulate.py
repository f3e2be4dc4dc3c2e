"""Seeded sampling, censoring schemes and the solver iteration benchmark."""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, EvdFitError
from .estimators import fit
from .model import CensoredSample, ProgressiveSample, Sample, check_params
from .solver import SolverConfig


@dataclass(frozen=True)
class NoCensoring:
    pass


@dataclass(frozen=True)
class Type1Censoring:
    time: float


@dataclass(frozen=True)
class Type2Censoring:
    r: int


@dataclass(frozen=True)
class ProgressiveCensoring:
    removals: tuple

    def __post_init__(self):
        object.__setattr__(self, "removals", tuple(int(k) for k in self.removals))
        if any(k < 0 for k in self.removals):
            raise DomainError("removals must be non-negative")

    @property
    def n(self) -> int:
        return len(self.removals) + sum(self.removals)


def quantile(family, params, u):
    """Inverse distribution function."""
    check_params(family, params)
    u = np.asarray(u, dtype=float)
    if family == "gumbel":
        out = params.mu - params.sigma * np.log(-np.log(u))
    elif family == "lev":
        out = params.mu + params.sigma * np.log(-np.log1p(-u))
    else:
        out = params.theta * (-np.log1p(-u)) ** (1.0 / params.beta)
    return float(out) if np.ndim(out) == 0 else out


def sample(family, params, n, seed=None) -> Sample:
    """``n`` draws by inversion; ``seed`` is an int, a sequence or a Generator."""
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    rng = np.random.default_rng(seed)
    u = rng.random(int(n))
    u[u == 0.0] = np.nextafter(0.0, 1.0)
    return Sample(quantile(family, params, u))


def apply_censoring(s: Sample, scheme, seed=None):
    """Censor a complete sample.

    Type II keeps the ``r`` smallest values, Type I keeps values ``<= T``, and
    progressive censoring withdraws ``R_i`` survivors, chosen uniformly at
    random, right after the i-th failure.
    """
    values = s.values
    n = s.n
    if isinstance(scheme, NoCensoring):
        return s
    if isinstance(scheme, Type2Censoring):
        r = int(scheme.r)
        if not 1 < r <= n:
            raise DomainError(f"type2 censoring needs 1 < r <= n, got r={r}, n={n}")
        if r == n:
            return s
        return CensoredSample(values[:r], n=n, mode="type2")
    if isinstance(scheme, Type1Censoring):
        obs = values[values <= scheme.time]
        if obs.size == 0:
            raise DomainError(f"no observation at or below T={scheme.time}")
        return CensoredSample(obs, n=n, mode="type1", censor_time=scheme.time)
    if isinstance(scheme, ProgressiveCensoring):
        if scheme.n != n:
            raise DomainError(f"scheme needs n={scheme.n}, sample has {n}")
        rng = np.random.default_rng(seed)
        alive = list(values)
        failures = []
        for k in scheme.removals:
            failures.append(alive.pop(0))
            if k:
                drop = set(rng.choice(len(alive), size=k, replace=False).tolist())
                alive = [v for i, v in enumerate(alive) if i not in drop]
        return ProgressiveSample(failures, scheme.removals)
    raise TypeError(f"unknown censoring scheme {scheme!r}")


@dataclass(frozen=True)
class SimConfig:
    family: str
    params: object
    n: int
    scheme: object = field(default_factory=NoCensoring)
    seed: int = 0
    replications: int = 1

    def __post_init__(self):
        check_params(self.family, self.params)
        if self.n < 2:
            raise DomainError("n must be >= 2")
        if self.replications < 1:
            raise DomainError("replications must be >= 1")
        if isinstance(self.scheme, ProgressiveCensoring) and self.scheme.n != self.n:
            raise DomainError("progressive scheme inconsistent with n")
        if isinstance(self.scheme, Type2Censoring) and not 1 < self.scheme.r <= self.n:
            raise DomainError("type2 scheme inconsistent with n")


def replicate(config: SimConfig, index: int):
    """Censored dataset number ``index``; depends only on (seed, index)."""
    rng = np.random.default_rng([config.seed, index])
    s = sample(config.family, config.params, config.n, rng)
    return apply_censoring(s, config.scheme, rng)


@dataclass
class SolverSummary:
    method: str
    runs: int
    failures: int
    iterations: list
    estimates: list
    terminations: list = field(default_factory=list)

    @property
    def median_iterations(self):
        return statistics.median(self.iterations) if self.iterations else math.nan

    @property
    def mean_iterations(self):
        return statistics.fmean(self.iterations) if self.iterations else math.nan

    def row(self) -> dict:
        return {
            "method": self.method,
            "runs": self.runs,
            "failures": self.failures,
            "median_iterations": self.median_iterations,
            "mean_iterations": self.mean_iterations,
            "min_iterations": min(self.iterations, default=None),
            "max_iterations": max(self.iterations, default=None),
        }


@dataclass
class BenchmarkSummary:
    solvers: list
    max_disagreement: float

    def table(self) -> list:
        return [s.row() for s in self.solvers]


def _run(datasets, family, solvers, solver_config):
    summaries = {m: SolverSummary(m, 0, 0, [], []) for m in solvers}
    worst = 0.0
    for data in datasets:
        ests = []
        for m in solvers:
            summ = summaries[m]
            summ.runs += 1
            try:
                rep = fit(data, family, solver_config, method=m)
            except EvdFitError:
                summ.failures += 1
                summ.estimates.append(math.nan)
                continue
            summ.iterations.append(rep.iterations)
            summ.estimates.append(rep.estimate)
            summ.terminations.append(rep.solver.termination)
            ests.append(rep.estimate)
        if len(ests) > 1:
            worst = max(worst, max(ests) - min(ests))
    return BenchmarkSummary([summaries[m] for m in solvers], worst)


def compare_solvers(data, family, solvers=("fixed-point", "newton"), solver_config=None) -> BenchmarkSummary:
    """Run each solver once on the same dataset."""
    return _run([data], family, list(solvers), solver_config or SolverConfig())


def benchmark_iterations(config: SimConfig, solvers=("fixed-point", "newton"), solver_config=None) -> BenchmarkSummary:
    """Iteration counts and failure rates of each solver over replications.

    Datasets that cannot be fitted at all (e.g. a Type-I scheme leaving one
    observation) are counted as failures for every solver.
    """
    solver_config = solver_config or SolverConfig()
    datasets = []
    skipped = 0
    for i in range(config.replications):
        try:
            datasets.append(replicate(config, i))
        except EvdFitError:
            skipped += 1
    summary = _run(datasets, config.family, list(solvers), solver_config)
    for s in summary.solvers:
        s.runs += skipped
        s.failures += skipped
    return summary
