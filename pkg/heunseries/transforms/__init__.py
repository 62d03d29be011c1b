"""Registry of built-in transformation records."""

from __future__ import annotations

from typing import Callable

from ..errors import UsageError
from .expr import ParamExpr, parse_param_expr
from .records import (
    AppliedTransformation, MobiusMap, PrefactorBase, PrefactorTerm, TransformationRecord,
    apply_transformation, transformed_eval,
)

# Global registry
_BUILTINS: dict[str, TransformationRecord] = {}


def builtin(name: str):
    """Decorator registering the record built by a zero-argument factory."""
    def decorator(fn: Callable[[], TransformationRecord]) -> Callable[[], TransformationRecord]:
        rec = fn()
        if rec.name != name:
            raise ValueError(f"builtin '{name}' produced a record named '{rec.name}'")
        _BUILTINS[name] = rec
        return fn
    return decorator


def get_all_builtins() -> dict[str, TransformationRecord]:
    return _BUILTINS


def get_builtin(name: str) -> TransformationRecord:
    try:
        return _BUILTINS[name]
    except KeyError:
        raise UsageError(
            f"unknown builtin record '{name}'; available: {', '.join(sorted(_BUILTINS))}"
        ) from None


from . import standard  # noqa: E402,F401  (registers the shipped records)

__all__ = [
    "AppliedTransformation", "MobiusMap", "ParamExpr", "PrefactorBase", "PrefactorTerm",
    "TransformationRecord", "apply_transformation", "builtin", "get_all_builtins",
    "get_builtin", "parse_param_expr", "transformed_eval",
]
