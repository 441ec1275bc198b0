"""Exception types shared across the package."""


class ValidationError(ValueError):
    """A parameter, configuration key, or argument violates its contract."""


class NumericalError(RuntimeError):
    """A numerical routine failed (non-convergence, singular system, ...)."""


class UnphysicalInputError(ValueError):
    """A covariance matrix fails a physicality requirement of a measure."""
