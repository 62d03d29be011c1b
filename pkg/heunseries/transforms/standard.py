"""Records shipped with the package."""

from __future__ import annotations

from ..core import PARAM_NAMES
from . import builtin
from .expr import parse_param_expr
from .records import MobiusMap, PrefactorBase, PrefactorTerm, TransformationRecord


def record_from_text(
    name: str,
    prefactor: list[tuple[str, str]],
    arg_map: dict[str, str],
    params: dict[str, str],
) -> TransformationRecord:
    """Build a record from expression strings, as they appear in a table file."""
    return TransformationRecord(
        name=name,
        prefactor=tuple(PrefactorTerm(PrefactorBase(b), parse_param_expr(e)) for b, e in prefactor),
        arg_map=MobiusMap(*(parse_param_expr(arg_map[k]) for k in ("p", "r", "s", "t"))),
        new_params=tuple(parse_param_expr(params[k]) for k in PARAM_NAMES),
    )


_SAME_ARGUMENT = {"p": "1", "r": "0", "s": "0", "t": "1"}


@builtin("identity")
def identity() -> TransformationRecord:
    return record_from_text(
        "identity", [], _SAME_ARGUMENT, {name: name for name in PARAM_NAMES},
    )


def _delta_reflection(name: str) -> TransformationRecord:
    return record_from_text(
        name, [("one_minus_x", "1 - delta")], _SAME_ARGUMENT,
        {
            "a": "a",
            "q": "q - (delta - 1)*gamma*a",
            "alpha": "beta - delta + 1",
            "beta": "alpha - delta + 1",
            "gamma": "gamma",
            "delta": "2 - delta",
        },
    )


@builtin("eq61")
def eq61() -> TransformationRecord:
    """(1-x)^(1-δ) Hl(a, q-(δ-1)γa; β-δ+1, α-δ+1, γ, 2-δ; x).

    Trades the exponent 0 at x=1 for 1-δ. Applying it twice gives back the
    original parameters; for δ=1 it reduces to the α <-> β swap.
    """
    return _delta_reflection("eq61")


@builtin("delta_reflection")
def delta_reflection() -> TransformationRecord:
    """Descriptive alias of ``eq61``."""
    return _delta_reflection("delta_reflection")
