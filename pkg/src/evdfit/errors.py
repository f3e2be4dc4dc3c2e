"""Exception types raised by evdfit."""


class EvdFitError(Exception):
    """Base class for all evdfit errors."""


class DomainError(EvdFitError, ValueError):
    """Data or parameters outside the support of a distribution."""


class SampleTooSmallError(EvdFitError, ValueError):
    """Fewer than two observations available for fitting."""


class DegenerateSampleError(EvdFitError, ValueError):
    """All observations coincide, so no positive fixed point exists."""


class UnsupportedRegimeError(EvdFitError, ValueError):
    """The family cannot be fitted under the given censoring regime."""


class NoFixedPointError(EvdFitError, RuntimeError):
    """No sign change of t - g(t) could be located."""


class ConvergenceError(EvdFitError, RuntimeError):
    """An iterative solver stopped without meeting its tolerance.

    The partially filled solver result is kept in ``result`` when available.
    """

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


class NumericalError(ConvergenceError):
    """A map evaluation produced a non-finite value."""


class OracleError(EvdFitError, RuntimeError):
    """The profile-likelihood oracle could not bracket an interior maximum."""
