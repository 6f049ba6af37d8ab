"""Exception types shared across the package."""


class DomainError(ValueError):
    """Raised when a parameter lies outside the domain of an operation."""


class NumericError(ArithmeticError):
    """Raised when a computation produces non-finite values or fails to converge."""


class ConvergenceError(NumericError):
    """Adaptive refinement did not converge; carries the last two iterates."""

    def __init__(self, message, previous=None, last=None):
        super().__init__(message)
        self.previous = previous
        self.last = last
