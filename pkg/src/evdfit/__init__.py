"""Maximum likelihood for extreme value distributions by fixed-point iteration.

Gumbel (maxima), least-extreme-value (minima) and two-parameter Weibull
families, for complete, Type-I, Type-II and progressively Type-II censored
samples.
"""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    ConvergenceError,
    DegenerateSampleError,
    DomainError,
    EvdFitError,
    NoFixedPointError,
    SampleTooSmallError,
    UnsupportedRegimeError,
)
from .estimators import FitReport, IterationMap, build_map, fit, sigma_bracket  # noqa: E402
from .model import (  # noqa: E402
    CensoredSample,
    GumbelParams,
    LevParams,
    ProgressiveSample,
    Sample,
    WeibullParams,
    loglik,
)
from .solver import SolverConfig, SolverResult  # noqa: E402

__all__ = [
    "CensoredSample",
    "ConvergenceError",
    "DegenerateSampleError",
    "DomainError",
    "EvdFitError",
    "FitReport",
    "GumbelParams",
    "IterationMap",
    "LevParams",
    "NoFixedPointError",
    "ProgressiveSample",
    "Sample",
    "SampleTooSmallError",
    "SolverConfig",
    "SolverResult",
    "UnsupportedRegimeError",
    "WeibullParams",
    "build_map",
    "fit",
    "loglik",
    "sigma_bracket",
]
