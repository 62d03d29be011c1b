"""Classical Frobenius series at x=0: c_{n+1} = A_n c_n + B_n c_{n-1}, c_1 = A_0 c_0."""

from __future__ import annotations

import logging
from dataclasses import dataclass

from .core import Branch, HeunParams, SeriesValue, check_argument, real_power, series_at_origin
from .errors import ConvergenceError, DomainError, ResonantIndexError

log = logging.getLogger("heunseries.recurrence")


@dataclass(frozen=True)
class SeriesControl:
    """Truncation control for direct series summation."""
    tol: float = 1e-14
    n_max: int = 500


@dataclass(frozen=True)
class CoefficientTable:
    lam: float
    c: tuple[float, ...]


def _denominator(n: int, lam: float, p: HeunParams) -> float:
    den = p.a * (n + 1 + lam) * (n + p.gamma + lam)
    if den == 0:
        raise ResonantIndexError(n)
    return den


def coeff_A(n: int, lam: float, params: HeunParams) -> float:
    p = params
    num = (n + lam) * (n - 1 + p.gamma + p.epsilon + lam + p.a * (n - 1 + p.gamma + lam + p.delta)) + p.q
    return num / _denominator(n, lam, p)


def coeff_A_alphabeta(n: int, lam: float, params: HeunParams) -> float:
    """Second printed form of A_n, with ε eliminated through the constraint."""
    p = params
    num = (n + lam) * (n + p.alpha + p.beta - p.delta + lam + p.a * (n + p.delta + p.gamma - 1 + lam)) + p.q
    return num / _denominator(n, lam, p)


def coeff_B(n: int, lam: float, params: HeunParams) -> float:
    p = params
    return -(n - 1 + lam + p.alpha) * (n - 1 + lam + p.beta) / _denominator(n, lam, p)


def coeff_B_epsilon(n: int, lam: float, params: HeunParams) -> float:
    """First printed form of B_n, written through γ, δ, ε."""
    p = params
    num = (n - 1 + lam) * (n + p.gamma + p.delta + p.epsilon - 2 + lam) + p.alpha * p.beta
    return -num / _denominator(n, lam, p)


def frobenius_coeffs(params: HeunParams, branch: Branch, N: int) -> CoefficientTable:
    """Coefficients c_0..c_N of the branch's Frobenius series."""
    if N < 0:
        raise DomainError(f"coefficient order must be nonnegative, got {N}")
    lam = branch.lam
    c = [branch.c0]
    if N >= 1:
        c.append(coeff_A(0, lam, params) * c[0])
    for n in range(1, N):
        c.append(coeff_A(n, lam, params) * c[n] + coeff_B(n, lam, params) * c[n - 1])
    return CoefficientTable(lam=lam, c=tuple(c))


def frobenius_eval(
    params: HeunParams,
    branch: Branch,
    x: float,
    control: SeriesControl | None = None,
) -> SeriesValue:
    """Sum c_n x^(n+λ) with first and second derivatives.

    Summation stops once three consecutive terms are each below
    tol * |partial sum|; x=0 returns the λ-limit.
    """
    control = control or SeriesControl()
    lam = branch.lam
    check_argument(params, lam, x)
    if x == 0:
        return series_at_origin(frobenius_coeffs(params, branch, 2).c, lam, terms_used=1)

    # t_n = c_n x^n keeps the partial sums bounded even when |a| < 1
    prev, term = 0.0, branch.c0
    s0 = term
    s1 = lam * term
    s2 = lam * (lam - 1) * term
    small = 0
    for n in range(control.n_max):
        a_n = coeff_A(n, lam, params)
        b_n = coeff_B(n, lam, params) if n >= 1 else 0.0
        prev, term = term, a_n * x * term + b_n * x * x * prev
        p = n + 1 + lam
        s0 += term
        s1 += p * term
        s2 += p * (p - 1) * term
        small = small + 1 if abs(term) <= control.tol * abs(s0) else 0
        if small >= 3:
            break
    else:
        raise ConvergenceError(
            f"frobenius series: no convergence by N_max={control.n_max} at x={x:g}"
        )

    scale = real_power(x, lam, what="x^lambda")
    log.debug("frobenius x=%g converged after %d terms", x, n + 2)
    return SeriesValue(
        value=scale * s0,
        d1=scale * s1 / x,
        d2=scale * s2 / (x * x),
        terms_used=n + 2,
        error_estimate=abs(scale * term),
    )
