import logging
from fractions import Fraction

import numpy as np
import pytest
from numpy.testing import assert_allclose

from heunseries.core import PARAM_NAMES, Branch, BranchKind, HeunParams
from heunseries.errors import ConvergenceError, NotTerminatedError, UsageError
from heunseries.recurrence import coeff_A, coeff_B, frobenius_coeffs, frobenius_eval
from heunseries.reductions import gauss_2f1
from heunseries.trf import (
    TrfTruncation, detect_b_termination, generic_trf_sum, leading_subseries_coeffs,
    subseries_terms, trf_eval, trf_eval_infinite, trf_eval_poly_ab, trf_eval_poly_b,
    trf_extract_coeffs,
)


def _heun(a=2.0, q=1.0, alpha=1.0, beta=2.0, gamma=1.0, delta=1.0) -> HeunParams:
    return HeunParams(a=a, q=q, alpha=alpha, beta=beta, gamma=gamma, delta=delta)


def test_truncation_validation():
    with pytest.raises(UsageError):
        TrfTruncation(n_max=1)
    with pytest.raises(UsageError):
        TrfTruncation(inner_cap=0)
    with pytest.raises(UsageError):
        TrfTruncation(tol=0)


def test_generic_sum_reproduces_frobenius(pstar):
    r = generic_trf_sum(
        lambda n: coeff_A(n, 0.0, pstar), lambda n: coeff_B(n, 0.0, pstar), 0.0, 0.1,
    )
    assert r.value == pytest.approx(frobenius_eval(pstar, Branch.first(pstar), 0.1).value, rel=1e-10)


def test_generic_sum_without_a_is_leading_subseries(pstar):
    x = 0.3
    B = lambda n: coeff_B(n, 0.0, pstar)  # noqa: E731
    expected, term = 1.0, 1.0
    for i in range(200):
        term *= B(2 * i + 1) * x * x
        expected += term
    r = generic_trf_sum(lambda n: 0.0, B, 0.0, x)
    assert r.value == pytest.approx(expected, rel=1e-13)


def test_generic_sum_without_b_is_product_of_a(pstar):
    x = 0.2
    A = lambda n: coeff_A(n, 0.0, pstar)  # noqa: E731
    expected, term = 1.0, 1.0
    for n in range(200):
        term *= A(n) * x
        expected += term
    r = generic_trf_sum(A, lambda n: 0.0, 0.0, x)
    assert r.value == pytest.approx(expected, rel=1e-12)


def test_generic_sum_at_origin(pstar):
    r = generic_trf_sum(lambda n: coeff_A(n, 0.0, pstar), lambda n: coeff_B(n, 0.0, pstar), 0.0, 0.0)
    assert (r.value, r.d1, r.d2) == (1.0, 0.5, 0.5)


def test_infinite_at_origin(pstar):
    assert trf_eval_infinite(pstar, Branch.first(pstar), 0.0).value == 1.0


@pytest.mark.parametrize("x", [0.1, 0.25, -0.3])
def test_infinite_closed_form(pstar, x):
    r = trf_eval_infinite(pstar, Branch.first(pstar), x)
    assert r.value == pytest.approx(2 / (2 - x), rel=1e-12)
    assert r.d1 == pytest.approx(2 / (2 - x) ** 2, rel=1e-11)
    assert r.d2 == pytest.approx(4 / (2 - x) ** 3, rel=1e-10)


def test_hypergeometric_at_minus_one():
    # a=-1 with q=0 and ε=δ: every A_n vanishes
    p = _heun(a=-1.0, q=0.0, alpha=-4.0, beta=2.0, gamma=1.0, delta=-1.0)
    value = trf_eval(p, Branch.first(p), 0.3).value
    assert value == pytest.approx(gauss_2f1(-2, 1, 1, 0.09), abs=1e-12)
    assert value == pytest.approx(0.91 ** 2, abs=1e-12)


def test_approach_to_minus_one():
    f21 = gauss_2f1(-2, 1, 1, 0.09)
    diffs = []
    for h in (1e-4, 1e-6):
        p = _heun(a=-1.0 + h, q=0.0, alpha=-4.0, beta=2.0, gamma=1.0, delta=-1.0)
        diff = abs(trf_eval(p, Branch.first(p), 0.3).value - f21)
        assert diff <= 10 * h * max(1.0, abs(f21))
        diffs.append(diff)
    assert diffs[1] < diffs[0]


def test_b_terminated_example():
    p = _heun(alpha=-2.0)
    b = Branch.first(p)
    assert leading_subseries_coeffs(p, b, 2) == [1.0, -1.0, 0.0]
    r = trf_eval_poly_b(p, b, 0.1)
    assert r.value == pytest.approx(frobenius_eval(p, b, 0.1).value, rel=1e-10)


def test_not_b_terminated():
    p = _heun(alpha=0.7, beta=1.3)
    with pytest.raises(NotTerminatedError, match="not B-terminated"):
        trf_eval_poly_b(p, Branch.first(p), 0.1)


def test_doubly_terminated_example():
    p = _heun(alpha=-2.0, beta=-4.0)
    b = Branch.first(p)
    # (-1)_i (-2)_i / ((1)_i (1)_i)
    assert leading_subseries_coeffs(p, b, 3) == [1.0, 2.0, 0.0, 0.0]
    r = trf_eval_poly_ab(p, b, 0.1)
    assert r.value == pytest.approx(frobenius_eval(p, b, 0.1).value, rel=1e-10)


def test_order_violation_names_the_swap():
    p = _heun(alpha=-4.0, beta=-2.0)
    b = Branch.first(p)
    with pytest.raises(NotTerminatedError, match="order violated.*swap alpha and beta"):
        trf_eval_poly_ab(p, b, 0.1)
    # the dispatcher swaps the symmetric pair itself
    assert trf_eval(p, b, 0.1).value == pytest.approx(frobenius_eval(p, b, 0.1).value, rel=1e-10)


def test_not_doubly_terminated():
    p = _heun(alpha=-2.0, beta=0.5)
    with pytest.raises(NotTerminatedError, match="not doubly terminated"):
        trf_eval_poly_ab(p, Branch.first(p), 0.1)


def test_termination_report():
    p = _heun(alpha=-2.0)
    report = detect_b_termination(p, Branch.first(p))
    assert report.terminated
    assert report.zero_indices == (3,)
    assert report.inner_bounds[0] == 1
    assert report.inner_bounds[2] == 0
    # odd sub-series never meet B_3
    assert 1 in report.open_subseries and 3 in report.open_subseries
    assert report.inner_bounds[1] == TrfTruncation().inner_cap


def test_no_termination():
    p = _heun(alpha=0.7, beta=1.3)
    report = detect_b_termination(p, Branch.first(p))
    assert not report.terminated
    assert report.zero_indices == ()


def test_leading_bound_follows_alpha():
    p = _heun(alpha=-6.0)
    assert detect_b_termination(p, Branch.first(p)).inner_bounds[0] == 3


def test_near_integer_alpha_is_snapped():
    p = _heun(alpha=-2.0 + 1e-12)
    report = detect_b_termination(p, Branch.first(p))
    assert report.zero_indices == (3,)
    assert leading_subseries_coeffs(p, Branch.first(p), 2)[2] == 0.0


@pytest.mark.parametrize("m", [1, 2, 3, 4, 5])
def test_leading_subseries_is_polynomial(m):
    p = _heun(alpha=-2.0 * m)
    b = Branch.first(p)
    report = detect_b_termination(p, b)
    assert 2 * m + 1 in report.zero_indices
    assert coeff_B(2 * m + 1, 0.0, p) == 0
    coeffs = leading_subseries_coeffs(p, b, m + 1)
    assert coeffs[m] != 0
    assert abs(coeffs[m + 1]) < 1e-300
    rows = subseries_terms(p, b.lam, 0.1, exact_zeros=True)
    # the leading row halts on its zero B product
    assert len(rows[0]) == m + 2
    assert rows[0][-1] == 0.0
    assert trf_eval_poly_b(p, b, 0.1).value == pytest.approx(frobenius_eval(p, b, 0.1).value, rel=1e-10)


def test_extract_golden(pstar):
    b = Branch.first(pstar)
    assert trf_extract_coeffs(pstar, b, M=0) == [1.0]
    assert_allclose(trf_extract_coeffs(pstar, b, M=2), [1.0, 0.5, 0.25], rtol=1e-15)


def test_extract_matches_frobenius_to_order_10(pstar):
    b = Branch.first(pstar)
    assert_allclose(trf_extract_coeffs(pstar, b, M=10), frobenius_coeffs(pstar, b, 10).c, rtol=1e-10, atol=0)


def test_extract_second_branch():
    p = _heun(gamma=0.5)
    b = Branch.second(p)
    trf = trf_extract_coeffs(p, b, M=8)
    assert_allclose(trf, frobenius_coeffs(p, b, 8).c, rtol=1e-10, atol=0)
    assert trf[0] == pytest.approx(b.c0)


def test_second_branch_leading_exponent():
    p = _heun(gamma=0.5)
    b = Branch.second(p)
    c0 = trf_extract_coeffs(p, b, M=0)[0]
    ratio = trf_eval_infinite(p, b, 1e-4).value / 1e-4 ** 0.5
    assert ratio == pytest.approx(c0, rel=1e-3)


def test_random_parameter_sets_match_frobenius(random_params, absolute_coeffs):
    for _ in range(100):
        p = random_params()
        b = Branch.first(p)
        assert_allclose(trf_extract_coeffs(p, b, M=20), frobenius_coeffs(p, b, 20).c, rtol=1e-10, atol=0)

        radius = min(1.0, abs(p.a))
        for x in np.linspace(-0.3, 0.3, 10) * radius:
            mag = float(np.sum(absolute_coeffs(p, 0.0, 1.0, 80) * np.abs(x) ** np.arange(81)))
            t = trf_eval(p, b, float(x)).value
            f = frobenius_eval(p, b, float(x)).value
            assert abs(t - f) <= 1e-9 * abs(f) + 1e-12 * mag


def test_no_convergence_by_n_max(pstar):
    with pytest.raises(ConvergenceError, match="n_max=3"):
        trf_eval_infinite(pstar, Branch.first(pstar), 0.9, TrfTruncation(n_max=3))


def test_warns_beyond_recommended_radius(pstar, caplog):
    with caplog.at_level(logging.WARNING, logger="heunseries.trf"):
        trf_eval_infinite(pstar, Branch.first(pstar), 0.6)
    assert "recommended" in caplog.text


def test_slow_eta_ratio_warns_inside_radius(caplog):
    # |x| < 0.5*min(1,|a|) but |eta|/|1-z| = 0.72/1.1152
    p = _heun(a=0.5)
    with caplog.at_level(logging.WARNING, logger="heunseries.trf"):
        with pytest.raises(ConvergenceError, match="raise --n-max or use --method frobenius"):
            trf_eval_infinite(p, Branch.first(p), 0.24, TrfTruncation(n_max=3))
    assert "|eta|/|1-z|=0.646" in caplog.text


def test_no_warning_well_inside_radius(pstar, caplog):
    with caplog.at_level(logging.WARNING, logger="heunseries.trf"):
        trf_eval_infinite(pstar, Branch.first(pstar), 0.1)
    assert caplog.text == ""


def _exact_coeffs(p: HeunParams, N: int) -> list[float]:
    """c_0..c_N of the first branch in rational arithmetic, rounded once."""
    exact = HeunParams(*(Fraction(getattr(p, name)) for name in PARAM_NAMES))
    branch = Branch(BranchKind.FIRST, Fraction(0), Fraction(1))
    return [float(c) for c in frobenius_coeffs(exact, branch, N).c]


def test_extract_is_correctly_rounded_under_cancellation():
    p = _heun(a=-3.0, q=0.7, alpha=-6.0, beta=-3.0, gamma=0.5, delta=1.2)
    assert_allclose(trf_extract_coeffs(p, Branch.first(p), M=12), _exact_coeffs(p, 12), rtol=1e-15, atol=0)


def test_extract_random_sets_against_rational_recurrence(random_params):
    for _ in range(20):
        p = random_params()
        assert_allclose(trf_extract_coeffs(p, Branch.first(p), M=20), _exact_coeffs(p, 20), rtol=1e-15, atol=0)
