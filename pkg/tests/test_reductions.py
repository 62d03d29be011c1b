import logging
import math

import numpy as np
import pytest

from heunseries.core import HeunParams
from heunseries.errors import DomainError
from heunseries.reductions import gauss_2f1, reduction_check_first, reduction_check_second


def _collapsed(alpha, beta, gamma, delta) -> HeunParams:
    return HeunParams(a=-1.0, q=0.0, alpha=alpha, beta=beta, gamma=gamma, delta=delta)


def test_gauss_known_values():
    assert gauss_2f1(1, 1, 2, 0.5) == pytest.approx(2 * math.log(2), rel=1e-14)
    assert gauss_2f1(-2, 3, 1, 1.0) == 1.0
    assert gauss_2f1(0.3, 0.7, 1.1, 0.0) == 1.0


def test_gauss_terminating_polynomial():
    # 2F1(-2, 1; 1; z) = (1 - z)^2, also past the unit disk
    for z in (0.3, 2.0, -5.0):
        assert gauss_2f1(-2, 1, 1, z) == pytest.approx((1 - z) ** 2, rel=1e-14)


def test_gauss_polynomial_ignores_tolerance():
    assert gauss_2f1(-3, 0.5, 1.5, 0.4, tol=1e-2) == gauss_2f1(-3, 0.5, 1.5, 0.4)


def test_gauss_satisfies_hypergeometric_equation(rng):
    for _ in range(20):
        a, b = rng.uniform(-2.0, 2.0, size=2)
        c = rng.uniform(0.3, 3.0)
        z = rng.uniform(-0.6, 0.6)
        F = gauss_2f1(a, b, c, z)
        F1 = a * b / c * gauss_2f1(a + 1, b + 1, c + 1, z)
        F2 = a * (a + 1) * b * (b + 1) / (c * (c + 1)) * gauss_2f1(a + 2, b + 2, c + 2, z)
        terms = (z * (1 - z) * F2, (c - (a + b + 1) * z) * F1, a * b * F)
        residual = terms[0] + terms[1] - terms[2]
        assert abs(residual) <= 1e-12 * max(1.0, *(abs(t) for t in terms))


def test_gauss_matches_scipy(rng):
    special = pytest.importorskip("scipy.special")
    for _ in range(20):
        a, b = rng.uniform(-2.0, 2.0, size=2)
        c = rng.uniform(0.3, 3.0)
        z = rng.uniform(-0.8, 0.8)
        assert gauss_2f1(a, b, c, z) == pytest.approx(float(special.hyp2f1(a, b, c, z)), rel=1e-12, abs=1e-14)


def test_gauss_nonconvergent_argument():
    with pytest.raises(DomainError, match="nonconvergent argument"):
        gauss_2f1(0.5, 0.5, 1.0, 1.0)


def test_gauss_polar_parameter():
    with pytest.raises(DomainError, match="polar parameter c"):
        gauss_2f1(0.5, 0.5, -2.0, 0.1)
    # a terminating numerator that stops before the pole is fine
    assert gauss_2f1(-1, 0.5, -2.0, 0.1) == pytest.approx(1 + 0.5 * 0.1 / 2)


def test_first_branch_polynomial_collapse():
    p = _collapsed(-4.0, 2.0, 1.0, -1.0)
    for x in [*np.linspace(0.02, 0.88, 20), -0.3]:
        check = reduction_check_first(p, float(x))
        assert check.symmetric
        assert check.f21_value == pytest.approx((1 - x * x) ** 2, rel=1e-14)
        assert check.abs_diff <= 1e-12


def test_first_branch_infinite_collapse():
    p = _collapsed(1.0, 2.0, 1.0, 1.5)
    for x in np.linspace(0.02, 0.8, 20):
        check = reduction_check_first(p, float(x))
        assert check.f21_value == pytest.approx((1 - x * x) ** -0.5, rel=1e-13)
        assert check.abs_diff <= 1e-10 * max(1.0, abs(check.f21_value))


def test_first_branch_at_origin():
    check = reduction_check_first(_collapsed(1.0, 2.0, 1.0, 1.5), 0.0)
    assert check.heun_value == check.f21_value == 1.0


@pytest.mark.parametrize("alpha,delta,expected", [
    (-2.5, 0.0, lambda x: x ** 0.5 * (1 - x * x)),
    (-0.5, 1.0, lambda x: x ** 0.5),
])
def test_second_branch_collapse(alpha, delta, expected):
    p = _collapsed(alpha, 2.0, 0.5, delta)
    for x in np.linspace(0.02, 0.88, 20):
        x = float(x)
        check = reduction_check_second(p, x)
        assert check.symmetric
        assert check.f21_value == pytest.approx(expected(x), rel=1e-13)
        assert check.abs_diff <= 1e-11


def test_second_branch_negative_argument():
    with pytest.raises(DomainError):
        reduction_check_second(_collapsed(-2.5, 2.0, 0.5, 0.0), -0.3)


def test_non_symmetric_parameters_warn(caplog):
    p = HeunParams(a=-1.0, q=0.5, alpha=1.0, beta=2.0, gamma=1.0, delta=1.0)
    with caplog.at_level(logging.WARNING, logger="heunseries.reductions"):
        check = reduction_check_first(p, 0.2)
    assert not check.symmetric
    assert "not expected to agree" in caplog.text


def test_requires_a_minus_one(pstar):
    with pytest.raises(DomainError, match="a=-1"):
        reduction_check_first(pstar, 0.2)
