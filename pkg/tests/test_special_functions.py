import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import roots_genlaguerre

from diracsu11.errors import DomainError
from diracsu11.special_functions import (
    KummerParams,
    gamma_fn,
    gauss_laguerre,
    kummer_coeffs,
    kummer_m,
    laguerre_l,
    moment,
    pochhammer,
)

S_K1 = math.sqrt(0.75)  # s for k = -1, gamma = 0.5

# frozen from mpmath at 50 digits
GAMMA_HALF = 1.7724538509055160
NORM_CHI0 = 0.7132955681070844  # Gamma(2s)/(2 xi)^(2s), s = sqrt(3)/2, xi = 0.5/s


def test_kummer_examples():
    assert kummer_m(KummerParams(0, 1.7, 3.2)) == 1.0
    assert kummer_m(-2, 3, 1) == pytest.approx(5 / 12, rel=1e-15)
    y = 0.37
    assert kummer_m(-1, 2 * S_K1, y) == pytest.approx(1 - y / (2 * S_K1), rel=1e-15)


def test_kummer_coeff_examples():
    assert kummer_coeffs(0, 4.2) == [1.0]
    assert kummer_coeffs(1, Fraction(2)) == [1, Fraction(-1, 2)]
    assert kummer_coeffs(2, Fraction(3)) == [1, Fraction(-2, 3), Fraction(1, 12)]


def test_kummer_domain_errors():
    with pytest.raises(DomainError):
        kummer_m(-2, -3, 1.0)
    with pytest.raises(DomainError):
        kummer_m(-2, 0, 1.0)
    with pytest.raises(DomainError):
        kummer_m(0.5, 2.0, 1.0)


@pytest.mark.parametrize("b", [0.5, 2 * S_K1, 2.0, 2 * S_K1 + 2, 5.5])
def test_kummer_matches_mpmath(b):
    with mpmath.workdps(40):
        for n in range(0, 21, 4):
            for z in np.linspace(0.0, 50.0, 26):
                ref = float(mpmath.hyp1f1(-n, mpmath.mpf(b), mpmath.mpf(float(z))))
                assert kummer_m(-n, b, float(z)) == pytest.approx(ref, rel=1e-15, abs=1e-300)


def test_kummer_consistent_with_coefficients():
    """Series sum vs kummer_coeffs, relative to the term magnitudes for float coeffs."""
    for n in range(21):
        for b in (0.5, 2 * S_K1, 3.0, 7.25):
            exact_c = kummer_coeffs(n, Fraction(b))
            float_c = kummer_coeffs(n, b)
            for z in np.linspace(0.0, 50.0, 41):
                z = float(z)
                val = kummer_m(-n, b, z)
                exact = float(sum(c * Fraction(z) ** j for j, c in enumerate(exact_c)))
                assert val == exact
                terms = [c * z**j for j, c in enumerate(float_c)]
                scale = math.fsum(abs(t) for t in terms)
                assert abs(math.fsum(terms) - val) <= 1e-14 * scale


@settings(max_examples=200, deadline=None)
@given(
    st.integers(min_value=0, max_value=20),
    st.floats(min_value=-0.9, max_value=10.0),
    st.floats(min_value=0.0, max_value=50.0),
)
def test_kummer_vs_laguerre_recurrence(n, alpha, x):
    lhs = kummer_m(-n, alpha + 1.0, x)
    rhs = math.factorial(n) / pochhammer(alpha + 1.0, n) * laguerre_l(n, alpha, x)
    assert abs(lhs - rhs) <= 1e-12 * abs(lhs) + 1e-300


def test_gamma_examples():
    assert gamma_fn(1.0) == 1.0
    assert gamma_fn(5.0) == 24.0
    assert gamma_fn(0.5) == pytest.approx(GAMMA_HALF, rel=1e-15)
    with pytest.raises(DomainError):
        gamma_fn(0.0)


def test_gamma_recurrence():
    for x in np.linspace(0.5, 30.0, 300):
        assert gamma_fn(x + 1) == pytest.approx(x * gamma_fn(x), rel=1e-13)


def test_one_point_rule():
    rule = gauss_laguerre(1, 0.0)
    assert rule.nodes.tolist() == pytest.approx([1.0], rel=1e-15)
    assert rule.weights.tolist() == pytest.approx([1.0], rel=1e-15)


def test_ten_point_rule_first_moment():
    assert gauss_laguerre(10).integrate(lambda x: x) == pytest.approx(1.0, rel=1e-14)


@pytest.mark.parametrize("count,alpha", [(5, 0.0), (12, -0.5), (20, 2 * S_K1 - 1), (40, 1.3), (60, 4.0)])
def test_moments_exact_to_degree_2n_minus_1(count, alpha):
    rule = gauss_laguerre(count, alpha)
    assert len(rule) == count
    assert np.all(np.diff(rule.nodes) > 0) and np.all(rule.weights > 0)
    for j in range(2 * count):
        exact = math.exp(math.lgamma(alpha + 1 + j) - math.lgamma(alpha + 1))
        assert moment(rule, j) / math.gamma(alpha + 1) == pytest.approx(exact, rel=1e-12)


@pytest.mark.parametrize("count,alpha", [(10, 0.0), (30, 0.7), (80, 2.5)])
def test_agrees_with_scipy(count, alpha):
    nodes, weights = roots_genlaguerre(count, alpha)
    rule = gauss_laguerre(count, alpha)
    assert rule.nodes == pytest.approx(nodes, rel=1e-12)
    big = weights > 1e-280
    assert rule.weights[big] == pytest.approx(weights[big], rel=1e-9)


def test_large_rule_converges():
    rule = gauss_laguerre(200, 0.0)
    assert np.all(np.diff(rule.nodes) > 0)
    assert np.all(rule.weights >= 0)
    assert rule.integrate(lambda x: x**3) == pytest.approx(6.0, rel=1e-12)


def test_chi0_norm_by_quadrature():
    s, xi = S_K1, 0.5 / S_K1
    lam = 2 * xi
    rule = gauss_laguerre(40, 2 * s - 1)
    # int rho^(2s-1) e^(-2 xi rho) drho with x = 2 xi rho
    got = rule.integrate(lambda x: np.ones_like(x)) / lam ** (2 * s)
    assert got == pytest.approx(gamma_fn(2 * s) / lam ** (2 * s), rel=1e-13)
    assert got == pytest.approx(NORM_CHI0, rel=1e-13)


def test_quadrature_domain():
    with pytest.raises(DomainError):
        gauss_laguerre(0)
    with pytest.raises(DomainError):
        gauss_laguerre(3, -1.0)
