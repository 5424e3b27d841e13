"""Exception types shared across the package."""


class StripesError(Exception):
    """Base class for every error raised by this package."""


class DomainError(StripesError, ValueError):
    """Input outside the mathematical domain of an operation."""


class PreconditionError(StripesError, ValueError):
    """An operation's documented precondition does not hold."""


class ToleranceError(StripesError, ArithmeticError):
    """A series, quadrature or lattice sum could not certify the requested accuracy."""


class BracketingError(StripesError, RuntimeError):
    """No interior minimum was found while bracketing; ``trace`` holds the scan."""

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = trace if trace is not None else []


class FormatError(StripesError, ValueError):
    """A set or config file could not be parsed."""
