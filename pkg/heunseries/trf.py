"""Three-term recurrence formula (3TRF) expansions of the local Heun solutions.

The Frobenius series is regrouped by the number N of A-factors along each
path of the recurrence. A path with N A-factors that has taken j B-steps
contributes to x^(2j+N+λ); sub-series N (y_N) collects all of them. Each
sub-series is a nested sum over the B-counts i_0 <= i_1 <= ... <= i_N at
which the A-factors occur. The nested sums are accumulated row by row:

    S_0[j] = S_0[j-1] * b(0, j-1)
    S_N[j] = S_N[j-1] * b(N, j-1) + S_{N-1}[j] * a(N-1, j)

where b(N, i) carries B_{2i+N+1} x^2 and a(N, j) carries A_{2j+N} x.
In closed form b(N, i) = z * (Pochhammer step ratio) and
a(N, j) = (x/a) * [A-type rational factor], z = -x^2/a. The 1/(1+a) of the
η-form is folded into x/a, so a = -1 evaluates exactly.
"""

from __future__ import annotations

import logging
import sys
from dataclasses import dataclass
from typing import Any, Callable, Sequence

from mpmath import mp

from .core import (
    PARAM_NAMES, Branch, HeunParams, SeriesValue, TrfVariables, check_argument, pochhammer,
    real_power, series_at_origin,
)
from .errors import ConvergenceError, NotTerminatedError, ResonantIndexError, UsageError

log = logging.getLogger("heunseries.trf")

# integrality tolerance for exponent sums α+λ, β+λ entered as floats
_INTEGER_TOL = 1e-9

# |η|/|1 - z| above which the row sums of the double series decay slowly
_ETA_RATIO_WARN = 0.6

# decimal digits for coefficient extraction
_EXTRACT_DPS = 40

StepFn = Callable[[int, int], float]
IndexedFn = Callable[[int], float]


@dataclass(frozen=True)
class TrfTruncation:
    """Truncation of the formally infinite 3TRF sums."""
    n_max: int = 60          # cap on the number of A-factors (outer sum)
    inner_cap: int = 400     # cap on each nested B-count index
    tol: float = 1e-12       # relative tail tolerance
    radius: float = 0.5      # warn beyond radius * min(1, |a|)

    def __post_init__(self) -> None:
        if self.n_max < 2:
            raise UsageError(f"n_max must be >= 2, got {self.n_max}")
        if self.inner_cap < 1:
            raise UsageError(f"inner_cap must be >= 1, got {self.inner_cap}")
        if not self.tol > 0:
            raise UsageError(f"tol must be positive, got {self.tol}")


@dataclass(frozen=True)
class TerminationReport:
    terminated: bool
    zero_indices: tuple[int, ...]
    inner_bounds: tuple[int, ...]
    open_subseries: tuple[int, ...]


# --- closed-form factors --------------------------------------------------

def _snap(s: float) -> float:
    """Round an exponent sum to its integer when it is one up to float noise."""
    r = round(s)
    return float(r) if abs(s - r) <= _INTEGER_TOL else s


def _closed_form(
    params: HeunParams, lam: float, exact_zeros: bool, num: Callable[[float], Any] = float,
) -> tuple[StepFn, StepFn]:
    """Return (bracket_a, ratio_b) without their z and x/a factors.

    ratio_b(m, i): Pochhammer step (i + (m+α+λ)/2)(i + (m+β+λ)/2) /
                   ((i + 1 + (m+λ)/2)(i + (1+m+γ+λ)/2)),  B_{2i+m+1} = -ratio/a.
    bracket_a(m, j): [(j + (m+λ)/2)((1+a)j + C_m/2) + q/4] /
                     ((j + (m+1+λ)/2)(j + (m+γ+λ)/2)),      A_{2j+m} = bracket/a.

    ``num`` converts the parameters into the working number type.
    """
    a, q, alpha, beta, gamma, delta = (num(getattr(params, name)) for name in PARAM_NAMES)
    lam = num(lam)
    sa, sb = alpha + lam, beta + lam
    if exact_zeros:
        sa, sb = _snap_to(sa, num), _snap_to(sb, num)
    one_plus_a = 1 + a

    def ratio_b(m: int, i: int):
        den = (i + 1 + (m + lam) / 2) * (i + (1 + m + gamma + lam) / 2)
        if den == 0:
            raise ResonantIndexError(2 * i + m + 1)
        return (i + (m + sa) / 2) * (i + (m + sb) / 2) / den

    def bracket_a(m: int, j: int):
        den = (j + (m + 1 + lam) / 2) * (j + (m + gamma + lam) / 2)
        if den == 0:
            raise ResonantIndexError(2 * j + m)
        c_m = m + alpha + beta - delta + lam + a * (m + delta + gamma - 1 + lam)
        return ((j + (m + lam) / 2) * (one_plus_a * j + c_m / 2) + q / 4) / den

    return bracket_a, ratio_b


def _snap_to(s, num: Callable[[float], Any]):
    r = _snap(float(s))
    return num(r) if r.is_integer() else s


# --- nested-sum accumulation ---------------------------------------------

def _rows(a_step: StepFn, b_step: StepFn, trunc: TrfTruncation) -> tuple[list[list[float]], int]:
    """Accumulate sub-series rows S_N[j] until the outer tail is below tol."""
    rows: list[list[float]] = []
    total = peak = 0.0
    small_rows = 0
    terms = 0
    for m in range(trunc.n_max + 1):
        prev = rows[-1] if rows else []
        row: list[float] = []
        s = row_sum = 0.0
        small = 0
        for j in range(trunc.inner_cap + 1):
            if m == 0:
                s = 1.0 if j == 0 else (s * b_step(0, j - 1) if s != 0 else 0.0)
            else:
                carried = s * b_step(m, j - 1) if (j > 0 and s != 0) else 0.0
                incoming = prev[j] * a_step(m - 1, j) if (j < len(prev) and prev[j] != 0) else 0.0
                s = carried + incoming
            row.append(s)
            row_sum += s
            terms += 1
            if j + 1 < len(prev):
                continue
            # only the B-chain continues from here; halt on an exact zero product
            if s == 0:
                break
            small = small + 1 if abs(s) <= trunc.tol * max(peak, abs(total + row_sum)) else 0
            if small >= 3:
                break
        else:
            log.warning("sub-series %d truncated at inner_cap=%d", m, trunc.inner_cap)
        rows.append(row)
        contribution = row_sum
        total += contribution
        # measured against the largest partial sum seen
        peak = max(peak, abs(total))
        small_rows = small_rows + 1 if abs(contribution) <= trunc.tol * peak else 0
        if small_rows >= 3:
            log.debug("3TRF converged with %d sub-series, %d terms", m + 1, terms)
            return rows, terms
    raise ConvergenceError(
        f"3TRF series: no convergence by n_max={trunc.n_max}; "
        "raise --n-max or use --method frobenius"
    )


def _combine(
    rows: Sequence[Sequence[float]], lam: float, x: float, c0: float, terms: int,
) -> SeriesValue:
    s0 = s1 = s2 = 0.0
    for m, row in enumerate(rows):
        for j, s in enumerate(row):
            p = 2 * j + m + lam
            s0 += s
            s1 += p * s
            s2 += p * (p - 1) * s
    scale = c0 * real_power(x, lam, what="x^lambda")
    last = sum(rows[-1]) if rows else 0.0
    return SeriesValue(
        value=scale * s0,
        d1=scale * s1 / x,
        d2=scale * s2 / (x * x),
        terms_used=terms,
        error_estimate=abs(scale * last),
    )


def _path_coefficients(
    a_coef: StepFn, b_coef: StepFn, M: int, eps: float = sys.float_info.epsilon,
) -> list:
    """Coefficients of x^0..x^M (relative to x^λ) summed path by path.

    A coefficient below 8(k+1)·eps of its summed path magnitudes is cancellation
    noise and becomes 0; eps is the unit roundoff of the working precision.
    """
    coef = [0.0] * (M + 1)
    mag = [0.0] * (M + 1)
    prev: list[float] = []
    prev_abs: list[float] = []
    for m in range(M + 1):
        row: list[float] = []
        row_abs: list[float] = []
        s = t = 0.0
        for j in range((M - m) // 2 + 1):
            if m == 0:
                if j == 0:
                    s = t = 1.0
                elif s != 0:
                    f = b_coef(0, j - 1)
                    s, t = s * f, t * abs(f)
            else:
                carried = carried_abs = incoming = incoming_abs = 0.0
                if j > 0 and s != 0:
                    f = b_coef(m, j - 1)
                    carried, carried_abs = s * f, t * abs(f)
                if prev[j] != 0:
                    g = a_coef(m - 1, j)
                    incoming, incoming_abs = prev[j] * g, prev_abs[j] * abs(g)
                s, t = carried + incoming, carried_abs + incoming_abs
            row.append(s)
            row_abs.append(t)
            k = 2 * j + m
            coef[k] += s
            mag[k] += t
        prev, prev_abs = row, row_abs
    return [0.0 if abs(c) <= 8 * (k + 1) * eps * mag[k] else c for k, c in enumerate(coef)]


# --- public evaluators ----------------------------------------------------

def generic_trf_sum(
    A: IndexedFn, B: IndexedFn, lam: float, x: float, trunc: TrfTruncation | None = None,
) -> SeriesValue:
    """Evaluate the 3TRF regrouping of c_{n+1} = A_n c_n + B_n c_{n-1}, c_0 = 1."""
    trunc = trunc or TrfTruncation()
    if x == 0:
        coeffs = _path_coefficients(lambda m, j: A(2 * j + m), lambda m, i: B(2 * i + m + 1), 2)
        return series_at_origin(coeffs, lam, terms_used=1)
    rows, terms = _rows(
        lambda m, j: A(2 * j + m) * x,
        lambda m, i: B(2 * i + m + 1) * x * x,
        trunc,
    )
    return _combine(rows, lam, x, 1.0, terms)


def _closed_form_rows(
    params: HeunParams, lam: float, x: float, trunc: TrfTruncation, exact_zeros: bool,
) -> tuple[list[list[float]], int]:
    v = TrfVariables.at(x, params)
    x_over_a = x / params.a
    bracket_a, ratio_b = _closed_form(params, lam, exact_zeros)
    return _rows(
        lambda m, j: x_over_a * bracket_a(m, j),
        lambda m, i: v.z * ratio_b(m, i),
        trunc,
    )


def _warn_slow_convergence(params: HeunParams, x: float, trunc: TrfTruncation) -> None:
    """Log when x sits outside the recommended disk or |η| is close to |1 - z|."""
    v = TrfVariables.at(x, params)
    eta_ratio = abs(v.eta) / abs(1 - v.z)
    if abs(x) > trunc.radius * min(1.0, abs(params.a)) or eta_ratio > _ETA_RATIO_WARN:
        log.warning(
            "x=%g: |eta|/|1-z|=%.3g (recommended |x| <= %.2g*min(1,|a|)); "
            "the (z, eta) double series may converge slowly",
            x, eta_ratio, trunc.radius,
        )


def subseries_terms(
    params: HeunParams,
    lam: float,
    x: float,
    trunc: TrfTruncation | None = None,
    exact_zeros: bool = False,
) -> tuple[tuple[float, ...], ...]:
    """Nested-sum terms of each sub-series y_N at x, in units of c0 x^λ.

    Entry [N][j] is the sum of all terms of y_N carrying z^j (x/a)^N.
    """
    trunc = trunc or TrfTruncation()
    check_argument(params, lam, x)
    rows, _ = _closed_form_rows(params, lam, x, trunc, exact_zeros)
    return tuple(tuple(r) for r in rows)


def trf_eval_exponent(
    params: HeunParams,
    lam: float,
    x: float,
    trunc: TrfTruncation | None = None,
    c0: float = 1.0,
    exact_zeros: bool = False,
) -> SeriesValue:
    """3TRF closed-form evaluation for exponent λ and leading coefficient c0."""
    trunc = trunc or TrfTruncation()
    check_argument(params, lam, x)
    if x == 0:
        coeffs = _closed_form_coefficients(params, lam, 2, exact_zeros)
        return series_at_origin([c0 * c for c in coeffs], lam, terms_used=1)
    _warn_slow_convergence(params, x, trunc)
    rows, terms = _closed_form_rows(params, lam, x, trunc, exact_zeros)
    return _combine(rows, lam, x, c0, terms)


def trf_eval_infinite(
    params: HeunParams, branch: Branch, x: float, trunc: TrfTruncation | None = None,
) -> SeriesValue:
    return trf_eval_exponent(params, branch.lam, x, trunc, c0=branch.c0)


def trf_eval_poly_b(
    params: HeunParams, branch: Branch, x: float, trunc: TrfTruncation | None = None,
) -> SeriesValue:
    """Polynomial mode: α (or β) makes some B_n vanish; inner sums halt on the zero."""
    report = detect_b_termination(params, branch, trunc)
    if not report.terminated:
        raise NotTerminatedError(
            f"not B-terminated: no B_n vanishes for alpha={params.alpha:g}, beta={params.beta:g}"
        )
    return trf_eval_exponent(params, branch.lam, x, trunc, c0=branch.c0, exact_zeros=True)


def trf_eval_poly_ab(
    params: HeunParams, branch: Branch, x: float, trunc: TrfTruncation | None = None,
) -> SeriesValue:
    """Doubly terminated mode: both α and β terminate, with the α side first."""
    n_alpha = _zero_index(params.alpha + branch.lam)
    n_beta = _zero_index(params.beta + branch.lam)
    if n_alpha is None or n_beta is None:
        raise NotTerminatedError(
            f"not doubly terminated: alpha={params.alpha:g}, beta={params.beta:g}, lambda={branch.lam:g}"
        )
    if n_alpha > n_beta:
        raise NotTerminatedError(
            f"alpha/beta order violated: alpha-side bound (B_{n_alpha}) exceeds "
            f"beta-side bound (B_{n_beta}); swap alpha and beta, their roles are symmetric"
        )
    return trf_eval_exponent(params, branch.lam, x, trunc, c0=branch.c0, exact_zeros=True)


def trf_eval(
    params: HeunParams, branch: Branch, x: float, trunc: TrfTruncation | None = None,
) -> SeriesValue:
    """Pick the doubly terminated, B-terminated or infinite evaluator."""
    n_alpha = _zero_index(params.alpha + branch.lam)
    n_beta = _zero_index(params.beta + branch.lam)
    if n_alpha is not None and n_beta is not None:
        if n_alpha > n_beta:
            params = HeunParams(params.a, params.q, params.beta, params.alpha, params.gamma, params.delta)
        return trf_eval_poly_ab(params, branch, x, trunc)
    if n_alpha is not None or n_beta is not None:
        return trf_eval_poly_b(params, branch, x, trunc)
    return trf_eval_infinite(params, branch, x, trunc)


# --- termination and coefficients ----------------------------------------

def _zero_index(s: float) -> int | None:
    """n >= 1 with n - 1 + s = 0, when s is (nearly) a nonpositive integer."""
    r = _snap(s)
    if not r.is_integer() or r > 0:
        return None
    return int(1 - r)


def detect_b_termination(
    params: HeunParams, branch: Branch, trunc: TrfTruncation | None = None,
) -> TerminationReport:
    """Find the n with B_n = 0 and the resulting inner bound of each sub-series."""
    trunc = trunc or TrfTruncation()
    n_scan = 2 * trunc.inner_cap + trunc.n_max + 1
    zeros = sorted({
        n for n in (_zero_index(params.alpha + branch.lam), _zero_index(params.beta + branch.lam))
        if n is not None and n <= n_scan
    })
    bounds: list[int] = []
    open_k: list[int] = []
    for k in range(trunc.n_max + 1):
        candidates = [(n - k - 1) // 2 for n in zeros if n - k - 1 >= 0 and (n - k - 1) % 2 == 0]
        if candidates:
            bounds.append(min(candidates))
        else:
            bounds.append(trunc.inner_cap)
            open_k.append(k)
    return TerminationReport(
        terminated=bool(zeros),
        zero_indices=tuple(zeros),
        inner_bounds=tuple(bounds),
        open_subseries=tuple(open_k),
    )


def _closed_form_coefficients(params: HeunParams, lam: float, M: int, exact_zeros: bool) -> list[float]:
    """Path sums in extended precision; the float inputs are taken as exact."""
    with mp.workdps(_EXTRACT_DPS):
        bracket_a, ratio_b = _closed_form(params, lam, exact_zeros, num=mp.mpf)
        inv_a = 1 / mp.mpf(params.a)
        coeffs = _path_coefficients(
            lambda m, j: inv_a * bracket_a(m, j),
            lambda m, i: -inv_a * ratio_b(m, i),
            M,
            eps=mp.eps,
        )
        return [float(c) for c in coeffs]


def trf_extract_coeffs(
    params: HeunParams, branch: Branch, trunc: TrfTruncation | None = None, M: int = 20,
) -> list[float]:
    """Coefficients of x^(k+λ), k = 0..M, collected from the 3TRF nested sums."""
    if M < 0:
        raise UsageError(f"coefficient order must be nonnegative, got {M}")
    exact = detect_b_termination(params, branch, trunc).terminated
    coeffs = _closed_form_coefficients(params, branch.lam, M, exact)
    return [branch.c0 * c for c in coeffs]


def leading_subseries_coeffs(params: HeunParams, branch: Branch, M: int) -> list[float]:
    """z-power coefficients of y_0 up to z^M (y_0 = c0 x^λ sum_i coeff_i z^i)."""
    lam = branch.lam
    sa, sb = _snap(params.alpha + lam), _snap(params.beta + lam)
    out = []
    for i in range(M + 1):
        den = pochhammer(1 + lam / 2, i) * pochhammer((1 + params.gamma + lam) / 2, i)
        if den == 0:
            raise ResonantIndexError(2 * i - 1)
        out.append(pochhammer(sa / 2, i) * pochhammer(sb / 2, i) / den)
    return out
