"""Exceptions for heunseries. Each carries the CLI exit code it maps to."""

from __future__ import annotations


class HeunError(Exception):
    """Base class for every error raised by heunseries."""
    exit_code = 1


class UsageError(HeunError):
    exit_code = 1


class TableError(HeunError):
    """Malformed or unreadable transformation table."""
    exit_code = 1

    def __init__(self, message: str, index: int | None = None, field: str | None = None):
        where = []
        if index is not None:
            where.append(f"record {index}")
        if field is not None:
            where.append(f"field '{field}'")
        super().__init__(f"{message} ({', '.join(where)})" if where else message)
        self.index = index
        self.field = field


class ExpressionError(HeunError):
    """Syntax error or unknown symbol in a parameter-map expression."""
    exit_code = 1

    def __init__(self, message: str, position: int | None = None):
        super().__init__(message if position is None else f"{message} at position {position}")
        self.position = position


class DomainError(HeunError):
    exit_code = 2


class ResonantIndexError(DomainError):
    def __init__(self, n: int):
        super().__init__(f"resonant index n={n}: recurrence denominator vanishes")
        self.n = n


class NotTerminatedError(DomainError):
    pass


class ConvergenceError(HeunError):
    exit_code = 3
