"""Exception types raised by the engine."""

from typing import Optional, Tuple


class MVSpaceError(ValueError):
    """Base class for all engine errors."""


class DimensionMismatch(MVSpaceError):
    pass


class FieldMismatch(MVSpaceError):
    pass


class PreconditionError(MVSpaceError):
    """An operation was called outside its documented domain."""


class BudgetExceeded(MVSpaceError):
    """An enumeration would exceed the configured oracle budget."""


class InvariantViolation(MVSpaceError):
    """An internal cross-check between two algorithms disagreed."""


class NotAMultiVectorSpace(MVSpaceError):
    """A count function or chain fails the multi vector space axioms."""

    def __init__(self, message: str, witness: Optional[Tuple] = None):
        super().__init__(message)
        self.witness = witness


class SpaceFileError(MVSpaceError):
    """Syntax error in a space definition file."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        location = f"line {line}, column {column}: " if line else ""
        super().__init__(f"{location}{message}")
        self.message = message
