"""Exception types shared across the package."""


class LpCompactError(Exception):
    """Base class for all package errors."""


class ZeroSequence(LpCompactError, ValueError):
    pass


class ZeroVector(LpCompactError, ValueError):
    pass


class InfiniteExponent(LpCompactError, ValueError):
    """Raised when an operation needs a finite exponent but got p = inf."""


class DimensionMismatch(LpCompactError, ValueError):
    pass


class EmptySequence(LpCompactError, ValueError):
    pass


class UnknownPoint(LpCompactError, KeyError):
    pass


class NoCertificate(LpCompactError):
    """No cutoff below the horizon makes the tail smaller than epsilon."""


class ParseError(LpCompactError, ValueError):
    """Malformed instance file. Carries line/column when known."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(f"{message}{where}")
