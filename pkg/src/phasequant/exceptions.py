"""Exception hierarchy shared by all phasequant modules."""


class PhasequantError(Exception):
    """Base class for errors raised by phasequant."""


class DomainError(PhasequantError, ValueError):
    """An argument lies outside the domain of the requested operation."""


class ConvergenceError(PhasequantError, ArithmeticError):
    """A series, continued fraction, quadrature or search failed to converge."""


class TruncationError(PhasequantError):
    """The requested truncation dimension is too small for the target accuracy."""

    def __init__(self, message, required_dim=None):
        super().__init__(message)
        self.required_dim = required_dim


class NonMonotoneError(PhasequantError):
    """A bisection predicate was found to be non-monotone on the bracket."""


class ConsistencyError(PhasequantError):
    """Two independent evaluation routes disagree beyond tolerance."""
