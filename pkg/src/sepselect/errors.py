"""Exception types shared across the package."""


class DataError(ValueError):
    """Input data violates a precondition (bad CSV, empty class, k out of range, ...)."""


class NumericalError(RuntimeError):
    """An iterative routine failed numerically (non-finite values, no bracket, ...)."""
