"""Independent checks: ODE residual, adaptive integration oracle, cross-method comparison."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

import scipy.integrate

from .config import Config
from .core import Branch, HeunParams, SeriesValue
from .errors import ConvergenceError, DomainError, HeunError, UsageError
from .recurrence import SeriesControl, frobenius_eval
from .trf import trf_eval

log = logging.getLogger("heunseries.verify")

METHODS = ("frobenius", "trf", "rk")


def _coefficients(params: HeunParams, x: float) -> tuple[float, float]:
    """P(x), Q(x) of y'' + P y' + Q y = 0."""
    p = params
    if x == 0 or x == 1 or x == p.a:
        raise DomainError(f"singular point x={x:g} of the Heun equation")
    P = p.gamma / x + p.delta / (x - 1) + p.epsilon / (x - p.a)
    Q = (p.alpha * p.beta * x - p.q) / (x * (x - 1) * (x - p.a))
    return P, Q


def ode_residual(params: HeunParams, x: float, y: float, d1: float, d2: float) -> float:
    P, Q = _coefficients(params, x)
    return d2 + P * d1 + Q * y


def residual_scale(params: HeunParams, x: float, y: float, d1: float, d2: float) -> float:
    """max(1, |y|, |y'|, |y''|, largest residual summand)."""
    P, Q = _coefficients(params, x)
    return max(1.0, abs(y), abs(d1), abs(d2), abs(P * d1), abs(Q * y))


def rk_oracle(
    params: HeunParams,
    branch: Branch,
    x_target: float,
    x0: float = 0.05,
    tol: float = 1e-10,
    method: str = "DOP853",
    control: SeriesControl | None = None,
) -> float:
    """Integrate the Heun equation from x0 (Frobenius initial data) to x_target."""
    limit = min(1.0, params.a) if params.a > 0 else 1.0
    if not (0 < x0 <= x_target < limit):
        raise DomainError(
            f"invalid integration path: need 0 < x0 <= x_target < {limit:g}, "
            f"got x0={x0:g}, x_target={x_target:g}"
        )
    start = frobenius_eval(params, branch, x0, control)
    if x_target == x0:
        return start.value

    def rhs(x, u):
        P, Q = _coefficients(params, x)
        return [u[1], -P * u[1] - Q * u[0]]

    atol = tol * max(1.0, abs(start.value), abs(start.d1))
    sol = scipy.integrate.solve_ivp(
        rhs, (x0, x_target), [start.value, start.d1], method=method, rtol=tol, atol=atol,
    )
    if not sol.success:
        raise ConvergenceError(f"integrator failed: {sol.message}")
    log.debug("rk %s: %d steps from %g to %g", method, sol.t.size - 1, x0, x_target)
    return float(sol.y[0, -1])


@dataclass(frozen=True)
class PointComparison:
    x: float
    values: dict[str, float | None]
    error_estimates: dict[str, float | None]
    errors: dict[str, str] = field(default_factory=dict)


@dataclass(frozen=True)
class ComparisonReport:
    params: HeunParams
    branch: Branch
    points: tuple[PointComparison, ...]
    max_rel_discrepancy: float
    per_method_error_estimates: dict[str, float | None]


def _rel_discrepancy(u: float, v: float) -> float:
    scale = max(abs(u), abs(v))
    return 0.0 if scale == 0 else abs(u - v) / scale


def evaluate(method: str, params: HeunParams, branch: Branch, x: float, cfg: Config) -> SeriesValue:
    """Evaluate one point. The rk oracle yields a value only; its other slots are NaN."""
    if method == "frobenius":
        return frobenius_eval(params, branch, x, cfg.series)
    if method == "trf":
        return trf_eval(params, branch, x, cfg.trf)
    if method == "rk":
        if x <= 0:
            raise DomainError(f"rk oracle integrates forward from x0 > 0, got x={x:g}")
        value = rk_oracle(params, branch, x, min(cfg.rk.x0, x), cfg.rk.tol, cfg.rk.method, cfg.series)
        nan = float("nan")
        return SeriesValue(value, nan, nan, 0, nan)
    raise UsageError(f"unknown method '{method}'")


def compare_methods(
    params: HeunParams,
    branch: Branch,
    xs: Iterable[float],
    methods: Sequence[str] = METHODS,
    config: Config | None = None,
) -> ComparisonReport:
    """Evaluate every method at every x; per-point failures are recorded, not raised."""
    cfg = config or Config()
    unknown = [m for m in methods if m not in METHODS]
    if unknown:
        raise UsageError(f"unknown method(s): {', '.join(unknown)}; choose from {', '.join(METHODS)}")

    points = []
    worst = 0.0
    estimates: dict[str, float | None] = {m: None for m in methods}
    for x in xs:
        values: dict[str, float | None] = {}
        errs: dict[str, float | None] = {}
        failures: dict[str, str] = {}
        for m in methods:
            try:
                r = evaluate(m, params, branch, float(x), cfg)
                values[m], errs[m] = r.value, (None if m == "rk" else r.error_estimate)
            except HeunError as e:
                log.info("compare: %s failed at x=%g: %s", m, x, e)
                values[m], errs[m] = None, None
                failures[m] = str(e)
                continue
            if errs[m] is not None:
                prev = estimates[m]
                estimates[m] = errs[m] if prev is None else max(prev, errs[m])
        ok = [v for v in values.values() if v is not None and math.isfinite(v)]
        for u, v in combinations(ok, 2):
            worst = max(worst, _rel_discrepancy(u, v))
        points.append(PointComparison(float(x), values, errs, failures))

    return ComparisonReport(
        params=params,
        branch=branch,
        points=tuple(points),
        max_rel_discrepancy=worst,
        per_method_error_estimates=estimates,
    )
