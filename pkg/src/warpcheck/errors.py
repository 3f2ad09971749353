"""Exception hierarchy shared by every warpcheck module."""


class WarpcheckError(Exception):
    """Base class for all warpcheck errors."""


class ArityError(WarpcheckError, ValueError):
    """Jets of different arity were combined, or a seed index is out of range."""


class SingularityError(WarpcheckError, ArithmeticError):
    """Division by zero or a (numerically) singular metric."""


class DomainError(WarpcheckError, ValueError):
    """An argument lies outside the domain of an operation or chart."""


class DomainViolation(DomainError):
    """A warping function is not strictly positive where it is evaluated."""


class UsageError(WarpcheckError, ValueError):
    """An operation was called with an unusable combination of arguments."""


class ValidationError(WarpcheckError, ValueError):
    """A scenario document does not match the schema."""


class ParseError(WarpcheckError, ValueError):
    """A scenario file is not valid JSON."""

    def __init__(self, message, line=None, column=None):
        super().__init__(message)
        self.line = line
        self.column = column
