"""Shared exception types."""

from __future__ import annotations


class DynextError(Exception):
    """Base class for all errors raised by this package."""


class UsageError(DynextError):
    """The caller violated a precondition (wrong ring, wrong arity, ...)."""


class FieldMismatchError(UsageError):
    pass


class RingMismatchError(UsageError):
    pass


class ArityError(UsageError):
    pass


class NonHomogeneousError(UsageError):
    pass


class OffVarietyError(UsageError):
    """A point handed to an on-variety operation does not lie on the variety."""


class IndeterminacyError(DynextError):
    """A rational map was evaluated at a common zero of its coordinate forms."""


class ParseError(DynextError):
    """Syntax error in a polynomial or problem file; carries line/column."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        super().__init__(f"{message} (line {line}, column {column})" if line else message)


class UnknownVariableError(ParseError):
    pass
