"""Exception hierarchy shared by all modules."""


class ShrinkerLabError(Exception):
    """Base class for every error raised by the package."""


class DomainError(ShrinkerLabError, ValueError):
    """An argument lies outside the domain where an operation is defined."""


class ConvergenceError(ShrinkerLabError, RuntimeError):
    """A numerical procedure did not reach its tolerance.

    The best available estimate is attached as ``best_estimate`` so callers
    can still inspect it.
    """

    def __init__(self, message, best_estimate=None, error_estimate=None):
        super().__init__(message)
        self.best_estimate = best_estimate
        self.error_estimate = error_estimate


class DegenerateCircleError(DomainError):
    """|h| is (numerically) zero somewhere on a sampling circle."""


class UmbilicError(DomainError):
    """A quantity divides by the traceless second fundamental form at an umbilic."""


class ImmersionError(DomainError):
    """The chart tangent vectors are linearly dependent at the sample point."""


class ChartError(DomainError):
    """The chart is not isothermal at the requested point."""


class StepTooSmallError(ShrinkerLabError, RuntimeError):
    """Finite differences are dominated by roundoff."""


class NoSolutionError(ShrinkerLabError, RuntimeError):
    """A root-finding scan found no bracketing interval."""


class ConfigError(ShrinkerLabError, ValueError):
    """Invalid command-line or config-file input."""
