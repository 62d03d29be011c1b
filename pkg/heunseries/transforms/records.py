"""Transformation records and their application to a Heun parameter set.

A record describes a local solution of the same Heun equation as

    y(x) = prod_i base_i(x)^e_i * Hl(P'; (p x + r) / (s x + t))

with the bases drawn from a fixed set, and every exponent, Möbius coefficient
and mapped parameter given as an expression in the original parameters.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, NamedTuple

from ..core import PARAM_NAMES, Branch, HeunParams, SeriesValue, make_branch, real_power, validate_params
from ..errors import DomainError, UsageError
from ..recurrence import SeriesControl, frobenius_eval
from ..trf import TrfTruncation, trf_eval
from .expr import Num, ParamExpr

log = logging.getLogger("heunseries.transforms")

Jet = tuple[float, float, float]  # value, first and second x-derivative


class PrefactorBase(str, Enum):
    X = "x"
    ONE_MINUS_X = "one_minus_x"
    A_MINUS_X = "a_minus_x"
    ONE_MINUS_X_OVER_A = "one_minus_x_over_a"

    def at(self, x: float, a: float) -> tuple[float, float]:
        """Value and (constant) slope of the base."""
        if self is PrefactorBase.X:
            return x, 1.0
        if self is PrefactorBase.ONE_MINUS_X:
            return 1 - x, -1.0
        if self is PrefactorBase.A_MINUS_X:
            return a - x, -1.0
        return 1 - x / a, -1.0 / a


@dataclass(frozen=True)
class PrefactorTerm:
    base: PrefactorBase
    exponent: ParamExpr


@dataclass(frozen=True)
class MobiusMap:
    p: ParamExpr
    r: ParamExpr
    s: ParamExpr
    t: ParamExpr

    @classmethod
    def identity(cls) -> MobiusMap:
        return cls(Num(1.0), Num(0.0), Num(0.0), Num(1.0))


@dataclass(frozen=True)
class TransformationRecord:
    name: str
    prefactor: tuple[PrefactorTerm, ...]
    arg_map: MobiusMap
    new_params: tuple[ParamExpr, ...]  # ordered as PARAM_NAMES
    warnings: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self) -> None:
        if len(self.new_params) != len(PARAM_NAMES):
            raise UsageError(
                f"record '{self.name}' maps {len(self.new_params)} parameters, expected {len(PARAM_NAMES)}"
            )


class AppliedTransformation(NamedTuple):
    params: HeunParams
    prefactor: Callable[[float], Jet]
    argument: Callable[[float], Jet]


def _power_jet(f: float, slope: float, e: float) -> Jet:
    if e == 0:
        return 1.0, 0.0, 0.0
    g = real_power(f, e, what="prefactor")
    g1 = e * real_power(f, e - 1, what="prefactor derivative") * slope
    g2 = 0.0
    if e != 1:
        g2 = e * (e - 1) * real_power(f, e - 2, what="prefactor derivative") * slope * slope
    return g, g1, g2


def apply_transformation(rec: TransformationRecord, params: HeunParams) -> AppliedTransformation:
    """Mapped parameters plus closures for the prefactor and the mapped argument."""
    binding = params.binding()
    mapped = validate_params(*(e.evaluate(binding) for e in rec.new_params))
    exponents = [(term.base, term.exponent.evaluate(binding)) for term in rec.prefactor]
    p, r, s, t = (c.evaluate(binding) for c in (rec.arg_map.p, rec.arg_map.r, rec.arg_map.s, rec.arg_map.t))
    det = p * t - r * s
    if det == 0:
        raise DomainError(f"record '{rec.name}': argument map determinant p*t - r*s vanishes")
    a = params.a

    def prefactor(x: float) -> Jet:
        P, P1, P2 = 1.0, 0.0, 0.0
        for base, e in exponents:
            f, slope = base.at(x, a)
            g, g1, g2 = _power_jet(f, slope, e)
            P, P1, P2 = P * g, P1 * g + P * g1, P2 * g + 2 * P1 * g1 + P * g2
        return P, P1, P2

    def argument(x: float) -> Jet:
        den = s * x + t
        if den == 0:
            raise DomainError(f"record '{rec.name}': argument map has a pole at x={x:g}")
        return (p * x + r) / den, det / den ** 2, -2 * s * det / den ** 3

    return AppliedTransformation(mapped, prefactor, argument)


def transformed_eval(
    rec: TransformationRecord,
    params: HeunParams,
    branch: Branch,
    x: float,
    trunc: TrfTruncation | None = None,
    method: str = "trf",
    control: SeriesControl | None = None,
) -> SeriesValue:
    """prefactor(x) * Hl(mapped params; w(x)), derivatives by the exact chain rule."""
    applied = apply_transformation(rec, params)
    inner_branch = make_branch(branch.kind, applied.params)
    w, w1, w2 = applied.argument(x)
    if method == "trf":
        h = trf_eval(applied.params, inner_branch, w, trunc)
    elif method == "frobenius":
        h = frobenius_eval(applied.params, inner_branch, w, control)
    else:
        raise UsageError(f"unknown inner method '{method}' (use trf or frobenius)")
    P, P1, P2 = applied.prefactor(x)
    log.debug("%s: x=%g -> w=%g, prefactor=%g", rec.name, x, w, P)
    return SeriesValue(
        value=P * h.value,
        d1=P1 * h.value + P * h.d1 * w1,
        d2=P2 * h.value + 2 * P1 * h.d1 * w1 + P * (h.d2 * w1 * w1 + h.d1 * w2),
        terms_used=h.terms_used,
        error_estimate=abs(P) * h.error_estimate,
    )
