"""Gauss 2F1 by direct summation and the a = -1 hypergeometric collapse checks."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

from .core import Branch, HeunParams, real_power
from .errors import ConvergenceError, DomainError
from .trf import TrfTruncation, trf_eval

log = logging.getLogger("heunseries.reductions")

_MAX_TERMS = 20000


@dataclass(frozen=True)
class ReductionCheck:
    heun_value: float
    f21_value: float
    abs_diff: float
    symmetric: bool


def _nonpositive_integer(v: float) -> bool:
    return float(v).is_integer() and v <= 0


def gauss_2f1(a1: float, b1: float, c1: float, zz: float, tol: float = 1e-16) -> float:
    """Sum (a1)_k (b1)_k / ((c1)_k k!) zz^k until exact termination or the tail is below tol."""
    stops = [int(-v) for v in (a1, b1) if _nonpositive_integer(v)]
    last = min(stops) if stops else None
    if last is None and not abs(zz) < 1:
        raise DomainError(f"nonconvergent argument zz={zz:g} for a non-terminating 2F1")
    if _nonpositive_integer(c1) and (last is None or last > -c1):
        raise DomainError(f"polar parameter c={c1:g}")

    term = s = 1.0
    small = 0
    for k in range(_MAX_TERMS):
        if last is not None and k >= last:
            return s
        term *= (a1 + k) * (b1 + k) / ((c1 + k) * (k + 1)) * zz
        s += term
        if term == 0:
            return s
        if last is not None:
            continue
        small = small + 1 if abs(term) <= tol * abs(s) else 0
        if small >= 3:
            return s
    raise ConvergenceError(f"2F1 series: no convergence after {_MAX_TERMS} terms at zz={zz:g}")


def _is_symmetric(params: HeunParams) -> bool:
    return params.q == 0 and math.isclose(params.epsilon, params.delta, rel_tol=0, abs_tol=1e-12)


def _require_collapse(params: HeunParams) -> bool:
    if params.a != -1:
        raise DomainError(f"hypergeometric reduction needs a=-1, got a={params.a:g}")
    symmetric = _is_symmetric(params)
    if not symmetric:
        log.warning(
            "a=-1 reduction with q=%g, epsilon=%g, delta=%g: A_n does not vanish, "
            "the two sides are not expected to agree",
            params.q, params.epsilon, params.delta,
        )
    return symmetric


def reduction_check_first(
    params: HeunParams, x: float, trunc: TrfTruncation | None = None,
) -> ReductionCheck:
    """First branch at a=-1 against 2F1(α/2, β/2; (1+γ)/2; x²)."""
    symmetric = _require_collapse(params)
    heun = trf_eval(params, Branch.first(params), x, trunc).value
    f21 = gauss_2f1(params.alpha / 2, params.beta / 2, (1 + params.gamma) / 2, x * x)
    return ReductionCheck(heun, f21, abs(heun - f21), symmetric)


def reduction_check_second(
    params: HeunParams, x: float, trunc: TrfTruncation | None = None,
) -> ReductionCheck:
    """Second branch at a=-1 against x^(1-γ) 2F1((α+1-γ)/2, (β+1-γ)/2; (3-γ)/2; x²).

    a^(-(1-γ)/2) is not real at a=-1, so both sides use the unit leading coefficient.
    """
    symmetric = _require_collapse(params)
    branch = Branch.second(params, unit=True)
    heun = trf_eval(params, branch, x, trunc).value
    g = params.gamma
    f21 = real_power(x, 1 - g, what="x^(1-gamma)") * gauss_2f1(
        (params.alpha + 1 - g) / 2, (params.beta + 1 - g) / 2, (3 - g) / 2, x * x,
    )
    return ReductionCheck(heun, f21, abs(heun - f21), symmetric)
