"""Domain types and shared numerics for the general Heun equation.

    y'' + (γ/x + δ/(x-1) + ε/(x-a)) y' + (αβx - q) / (x(x-1)(x-a)) y = 0,
    ε = α + β - γ - δ + 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

from .errors import DomainError

PARAM_NAMES = ("a", "q", "alpha", "beta", "gamma", "delta")


@dataclass(frozen=True)
class HeunParams:
    """The six free parameters. epsilon is derived and never set directly."""
    a: float
    q: float
    alpha: float
    beta: float
    gamma: float
    delta: float
    epsilon: float = field(init=False)

    def __post_init__(self) -> None:
        for name in PARAM_NAMES:
            value = getattr(self, name)
            if not math.isfinite(value):
                raise DomainError(f"non-finite parameter: {name}={value}")
        if self.a == 0:
            raise DomainError("singular parameter: a must be nonzero")
        object.__setattr__(
            self, "epsilon", self.alpha + self.beta - self.gamma - self.delta + 1,
        )

    def binding(self) -> dict[str, float]:
        """Symbol binding for parameter-map expressions (epsilon excluded)."""
        return {name: getattr(self, name) for name in PARAM_NAMES}

    def as_dict(self) -> dict[str, float]:
        return {**self.binding(), "epsilon": self.epsilon}


def validate_params(
    a: float, q: float, alpha: float, beta: float, gamma: float, delta: float,
) -> HeunParams:
    """Build HeunParams from raw numbers, rejecting a=0 and non-finite input."""
    try:
        raw = [float(v) for v in (a, q, alpha, beta, gamma, delta)]
    except (TypeError, ValueError) as e:
        raise DomainError(f"non-finite parameter: {e}") from e
    return HeunParams(*raw)


class BranchKind(str, Enum):
    FIRST = "first"
    SECOND = "second"


@dataclass(frozen=True)
class Branch:
    """Indicial root λ and leading coefficient c0 of one Frobenius solution at x=0."""
    kind: BranchKind
    lam: float
    c0: float

    @classmethod
    def first(cls, params: HeunParams) -> Branch:
        if _is_integer(params.gamma) and params.gamma <= 0:
            raise DomainError(
                f"first branch requires gamma not in {{0,-1,-2,...}}, got {params.gamma:g}"
            )
        return cls(BranchKind.FIRST, 0.0, 1.0)

    @classmethod
    def second(cls, params: HeunParams, unit: bool = False) -> Branch:
        """x^(1-γ) branch with c0 = a^(-(1-γ)/2), or c0 = 1 when unit is set."""
        g = params.gamma
        if g == 1:
            raise DomainError("second branch is degenerate for gamma=1 (logarithmic solution)")
        if _is_integer(g) and g >= 2:
            raise DomainError(f"second branch requires gamma not in {{2,3,4,...}}, got {g:g}")
        lam = 1.0 - g
        if unit:
            return cls(BranchKind.SECOND, lam, 1.0)
        return cls(BranchKind.SECOND, lam, real_power(params.a, -lam / 2, what="c0 = a^(-(1-gamma)/2)"))


def make_branch(kind: BranchKind | str, params: HeunParams) -> Branch:
    kind = BranchKind(kind)
    return Branch.first(params) if kind is BranchKind.FIRST else Branch.second(params)


@dataclass(frozen=True)
class SeriesValue:
    """A solution value with first and second x-derivatives."""
    value: float
    d1: float
    d2: float
    terms_used: int
    error_estimate: float


@dataclass(frozen=True)
class TrfVariables:
    z: float
    eta: float

    @classmethod
    def at(cls, x: float, params: HeunParams) -> TrfVariables:
        return cls(z=-x * x / params.a, eta=(1 + params.a) * x / params.a)


def pochhammer(x: float, n: int) -> float:
    """Rising factorial (x)_n = x(x+1)...(x+n-1); (x)_0 = 1."""
    if n < 0:
        raise DomainError(f"pochhammer order must be nonnegative, got {n}")
    return float(math.prod(x + k for k in range(n)))


def indicial_roots(params: HeunParams) -> tuple[float, float]:
    return 0.0, 1.0 - params.gamma


def real_power(base: float, exponent: float, what: str = "power") -> float:
    """base**exponent over the reals; errors instead of going complex."""
    if base < 0 and not _is_integer(exponent):
        raise DomainError(f"{what}: non-real power ({base:g})^{exponent:g}")
    if base == 0 and exponent < 0:
        raise DomainError(f"{what}: zero base with negative exponent {exponent:g}")
    return float(base ** exponent)


def check_argument(params: HeunParams, lam: float, x: float) -> None:
    """Domain of a local series at x=0: |x| < min(1, |a|), x > 0 for non-integer λ."""
    if not math.isfinite(x):
        raise DomainError(f"non-finite argument x={x}")
    radius = min(1.0, abs(params.a))
    if abs(x) >= radius:
        raise DomainError(f"argument x={x:g} outside convergence disk |x| < {radius:g}")
    if x < 0 and not _is_integer(lam):
        raise DomainError(f"argument x={x:g} < 0 with non-integer exponent {lam:g}")


def series_at_origin(coeffs: Sequence[float], lam: float, terms_used: int) -> SeriesValue:
    """Value and derivatives of sum c_n x^(n+λ) in the limit x -> 0+."""
    value = d1 = d2 = 0.0
    for n, c in enumerate(coeffs[:3]):
        if c == 0:
            continue
        p = n + lam
        if p < 0:
            raise DomainError(f"series with exponent {lam:g} is singular at x=0")
        if p == 0:
            value += c
        if p == 1:
            d1 += c
        elif 0 < p < 1:
            d1 = math.nan
        if p == 2:
            d2 += 2 * c
        elif 0 < p < 2 and p != 1:
            d2 = math.nan
    return SeriesValue(value, d1, d2, terms_used, 0.0)


def _is_integer(v: float) -> bool:
    return float(v).is_integer()
