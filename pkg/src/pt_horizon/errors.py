"""Exception types shared across the package."""


class InvalidInputError(ValueError):
    """Raised for non-finite couplings, malformed specs, or bad flag values."""


class DomainError(ValueError):
    """Raised when an argument is outside the mathematical domain of a formula."""


class PreconditionError(ValueError):
    """Raised when a stated precondition (e.g. 'the point lies on a boundary') fails."""


class NumericalFailureError(RuntimeError):
    """Raised when an iterative numerical routine does not converge."""
