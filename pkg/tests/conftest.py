"""Shared fixtures for the heunseries test suite."""

from __future__ import annotations

import numpy as np
import pytest

from heunseries.core import HeunParams
from heunseries.recurrence import coeff_A, coeff_B


@pytest.fixture
def pstar() -> HeunParams:
    """a=2, q=1, α=1, β=2, γ=1, δ=1 (ε=2). Its first solution is 2/(2-x)."""
    return HeunParams(a=2.0, q=1.0, alpha=1.0, beta=2.0, gamma=1.0, delta=1.0)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)


def _away_from_integers(rng: np.random.Generator, lo: float, hi: float, gap: float = 0.1) -> float:
    while True:
        v = rng.uniform(lo, hi)
        if abs(v - round(v)) >= gap:
            return v


@pytest.fixture
def random_params(rng):
    """Factory for random valid parameter sets: 0.5 <= |a| <= 3, the rest in [-3, 3]."""
    def make(a_min: float = 0.5, a_max: float = 3.0, gamma_range: tuple[float, float] = (-3.0, 3.0)) -> HeunParams:
        a = rng.uniform(a_min, a_max) * rng.choice([-1.0, 1.0])
        q, alpha, beta, delta = rng.uniform(-3.0, 3.0, size=4)
        gamma = _away_from_integers(rng, *gamma_range)
        return HeunParams(a=a, q=q, alpha=alpha, beta=beta, gamma=gamma, delta=delta)
    return make


@pytest.fixture
def absolute_coeffs():
    """Coefficients of the recurrence run with |A_n|, |B_n|: the magnitude scale of the
    rounding error of any summation of c_n."""
    def run(params: HeunParams, lam: float, c0: float, N: int) -> np.ndarray:
        c = [abs(c0), abs(coeff_A(0, lam, params) * c0)]
        for n in range(1, N):
            c.append(abs(coeff_A(n, lam, params)) * c[n] + abs(coeff_B(n, lam, params)) * c[n - 1])
        return np.array(c[: N + 1])
    return run
