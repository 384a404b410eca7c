"""Exception types shared across the package."""

__all__ = [
    "AcdsError",
    "InvalidExponentError",
    "ConvergenceError",
    "ConfigurationError",
    "SolverError",
    "DivergenceError",
]


class AcdsError(Exception):
    """Base class for package errors."""


class InvalidExponentError(AcdsError, ValueError):
    """Norm or conjugate exponent outside its legal range."""


class ConvergenceError(AcdsError, RuntimeError):
    """An iterative routine hit its cap without meeting its tolerance."""


class ConfigurationError(AcdsError, ValueError):
    """Inconsistent or unsupported parameter combination."""


class SolverError(AcdsError, RuntimeError):
    """A subproblem solver failed (e.g. bisection bracket not found)."""


class DivergenceError(AcdsError, RuntimeError):
    """Nonfinite values appeared during an optimization run."""

    def __init__(self, message, state=None):
        super().__init__(message)
        self.state = state
