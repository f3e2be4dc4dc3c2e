"""Scalar fixed-point iteration, bisection fallback and a Newton comparator.

All three solvers work on a map ``g`` with a positive fixed point ``t = g(t)``.
The maps built in :mod:`evdfit.estimators` come with a residual ``h`` that has
the sign of ``t - g(t)`` and changes sign exactly once, from negative to
positive; that is what makes bisection a safe fallback whenever plain
iteration stalls or leaves the positive half-line.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import ConvergenceError, NoFixedPointError, NumericalError

CONVERGED = "converged"
FALLBACK = "fallback_bisection"
MAX_ITER = "max_iterations_exceeded"

# residuals that fail to shrink this many times in a row trigger the fallback
STALL_WINDOW = 10


@dataclass(frozen=True)
class SolverConfig:
    """Solver settings.

    ``initial=None`` lets the map pick its own starting value.  The stopping
    rule is ``|x[k+1] - x[k]| < tolerance``, or the same difference divided by
    ``|x[k+1]|`` when ``relative`` is set.
    """

    initial: float | None = None
    tolerance: float = 5e-5
    max_iterations: int = 500
    acceleration: str = "off"
    fallback: bool = True
    relative: bool = False

    def __post_init__(self):
        if not self.tolerance > 0:
            raise ValueError("tolerance must be > 0")
        if int(self.max_iterations) < 1:
            raise ValueError("max_iterations must be >= 1")
        if self.acceleration not in ("off", "aitken"):
            raise ValueError(f"unknown acceleration {self.acceleration!r}")
        if self.initial is not None and not (math.isfinite(self.initial) and self.initial > 0):
            raise ValueError("initial must be finite and > 0")


@dataclass
class SolverResult:
    estimate: float
    iterations: int
    residual_trace: list = field(default_factory=list)
    termination: str = CONVERGED
    iterates: list = field(default_factory=list)
    method: str = "fixed-point"

    @property
    def converged(self) -> bool:
        return self.termination in (CONVERGED, FALLBACK)

    @property
    def final_residual(self) -> float:
        return self.residual_trace[-1] if self.residual_trace else float("nan")


def _residual_fn(g):
    res = getattr(g, "residual", None)
    if res is not None:
        return res
    return lambda t: t - g(t)


def _bracket_of(g, bracket, guess):
    if bracket is not None:
        return bracket
    finder = getattr(g, "bracket", None)
    if finder is None:
        return None
    return finder(guess)


def _start(g, config, bracket):
    x0 = config.initial
    if x0 is None:
        x0 = getattr(g, "initial", None) or 1.0
    if bracket is not None:
        lo, hi = bracket
        x0 = min(max(x0, lo), hi)
    return float(x0)


def _converged(step, x_new, config):
    if config.relative:
        return step < config.tolerance * abs(x_new)
    return step < config.tolerance


def fixed_point_solve(g, config: SolverConfig | None = None, bracket=None) -> SolverResult:
    """Iterate ``x[k+1] = g(x[k])`` until successive iterates agree.

    ``g`` is an :class:`~evdfit.estimators.IterationMap` or any callable.
    For a plain callable the fallback needs an explicit ``bracket``.

    Every evaluation of ``g`` is one iteration; the evaluation that confirms
    convergence counts too.  Bisection takes over when the iteration leaves
    ``(0, inf)``, stalls for ``STALL_WINDOW`` steps, or exhausts
    ``max_iterations`` (unless ``config.fallback`` is off).
    """
    config = config or SolverConfig()
    if bracket is None and getattr(g, "bracket", None) is not None:
        bracket = g.bracket(config.initial)
    x = _start(g, config, bracket)
    trace, iterates = [], [x]
    stalled = 0
    history = [x]  # Aitken needs the last three points of a plain sequence

    def result(estimate, termination):
        return SolverResult(estimate, len(trace), trace, termination, iterates)

    def bail(reason):
        res = result(x, MAX_ITER)
        if not config.fallback:
            if reason == MAX_ITER:
                return res
            raise ConvergenceError(f"fixed-point iteration failed: {reason}", res)
        br = _bracket_of(g, bracket, x)
        if br is None:
            raise ConvergenceError(f"fixed-point iteration failed ({reason}) and no bracket is available", res)
        root = bisection_fallback(_residual_fn(g), br, config.tolerance)
        return result(root, FALLBACK)

    for _ in range(int(config.max_iterations)):
        gx = float(g(x))
        if not math.isfinite(gx):
            if config.fallback:
                return bail("non-finite map value")
            raise NumericalError(f"map returned {gx!r} at {x!r}", result(x, MAX_ITER))
        step = abs(gx - x)
        trace.append(step)
        iterates.append(gx)
        if gx <= 0:
            return bail("iterate left the positive half-line")
        if _converged(step, gx, config):
            return result(gx, CONVERGED)
        stalled = stalled + 1 if len(trace) > 1 and step >= trace[-2] else 0
        if stalled >= STALL_WINDOW:
            return bail("residuals stopped decreasing")
        x = gx
        if config.acceleration == "aitken":
            history.append(gx)
            if len(history) == 3:
                x0, x1, x2 = history
                denom = x2 - 2.0 * x1 + x0
                if denom != 0.0:
                    acc = x0 - (x1 - x0) ** 2 / denom
                    if math.isfinite(acc) and acc > 0:
                        x = acc
                history = [x]
    return bail(MAX_ITER)


def bisection_fallback(h, bracket, tolerance: float = 5e-5, max_iterations: int = 200) -> float:
    """Root of ``h`` inside ``bracket = (lo, hi]``, where ``h`` goes from negative to positive.

    Stops once the interval is narrower than ``tolerance`` or ``h`` hits
    exactly zero.
    """
    lo, hi = map(float, bracket)
    if not lo < hi:
        raise NoFixedPointError(f"empty bracket ({lo}, {hi}]")
    h_hi = h(hi)
    if h_hi == 0:
        return hi
    h_lo = h(lo)
    if h_lo == 0:
        return lo
    if not (h_lo < 0 < h_hi):
        raise NoFixedPointError(f"no sign change on ({lo}, {hi}]: h = {h_lo}, {h_hi}")
    for _ in range(max_iterations):
        mid = 0.5 * (lo + hi)
        if hi - lo < tolerance or mid in (lo, hi):
            return mid
        hm = h(mid)
        if hm == 0:
            return mid
        if hm < 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _central_diff(h, x):
    d = 1e-6 * max(abs(x), 1e-3)
    d = min(d, 0.5 * x)
    return (h(x + d) - h(x - d)) / (2.0 * d)


def newton_raphson_solve(score, config: SolverConfig | None = None, bracket=None) -> SolverResult:
    """Newton-Raphson on ``h(t) = 0`` with a central-difference derivative.

    ``score`` is either an :class:`~evdfit.estimators.IterationMap` (its
    ``residual`` is used as ``h``) or a plain callable ``h``.  One iteration
    is one Newton step.  Steps that would leave ``(0, inf)`` are halved.  A
    derivative below ``1e-12`` (flat, or sloping the wrong way for a residual
    that crosses zero upwards) hands over to bisection when a bracket is
    available.
    """
    config = config or SolverConfig()
    h = score.residual if hasattr(score, "residual") else score
    if bracket is None and getattr(score, "bracket", None) is not None:
        bracket = score.bracket(config.initial)
    x = _start(score, config, bracket)
    trace, iterates = [], [x]

    def result(estimate, termination):
        return SolverResult(estimate, len(trace), trace, termination, iterates, method="newton")

    def bail(reason):
        if config.fallback and bracket is not None:
            return result(bisection_fallback(h, bracket, config.tolerance), FALLBACK)
        res = result(x, MAX_ITER)
        if reason == MAX_ITER:
            return res
        raise ConvergenceError(f"Newton-Raphson failed: {reason}", res)

    for _ in range(int(config.max_iterations)):
        hx = h(x)
        if not math.isfinite(hx):
            return bail("non-finite residual")
        if hx == 0:
            return result(x, CONVERGED)
        dh = _central_diff(h, x)
        if not math.isfinite(dh) or dh < 1e-12:
            return bail("singular derivative")
        step = hx / dh
        x_new = x - step
        while x_new <= 0:
            step *= 0.5
            x_new = x - step
        delta = abs(x_new - x)
        trace.append(delta)
        iterates.append(x_new)
        x = x_new
        if _converged(delta, x_new, config):
            return result(x, CONVERGED)
    return bail(MAX_ITER)
