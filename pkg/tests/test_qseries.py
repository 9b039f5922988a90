import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qharmonic import DomainError, ExactModeUnsupported, PoleError, QContext
from qharmonic.qseries import (
    HyperSpec,
    basic_hyper,
    gauss_binomial,
    gauss_binomial_value,
    jackson_integral,
    q_beta,
    q_diff,
    q_exp,
    q_gamma,
    q_number,
    q_pochhammer,
)

EX = QContext.exact("1/2")
FL = QContext.floating(0.5)
fractions = st.fractions(min_value=Fraction(-3), max_value=Fraction(3), max_denominator=12)


def brute_poch(a, b, n):
    out = Fraction(1)
    for k in range(n):
        out *= 1 - a * b**k
    return out


@given(a=fractions, n=st.integers(0, 8))
def test_finite_pochhammer_is_the_product(a, n):
    assert q_pochhammer(a, Fraction(1, 2), n, EX) == brute_poch(a, Fraction(1, 2), n)


@given(a=fractions.filter(lambda a: a not in (1, 2, 4, 8)), m=st.integers(1, 3), n=st.integers(0, 3))
def test_pochhammer_splits_over_index_sum(a, m, n):
    b = Fraction(1, 2)
    lhs = q_pochhammer(a, b, m + n, EX)
    rhs = q_pochhammer(a, b, m, EX) * q_pochhammer(a * b**m, b, n, EX)
    assert lhs == rhs


def test_negative_index_inverts():
    a, b = Fraction(1, 3), Fraction(1, 2)
    assert q_pochhammer(a, b, -2, EX) * q_pochhammer(a * b**-2, b, 2, EX) == 1


@pytest.mark.parametrize("a", [0.3, -0.7, 0.9])
def test_infinite_product_against_mpmath(a):
    assert abs(q_pochhammer(a, 0.5, math.inf, FL) - float(mpmath.qp(a, 0.5))) < 1e-14


def test_real_index_is_a_quotient():
    val = q_pochhammer(0.3, 0.5, 2.5, FL)
    ref = mpmath.qp(0.3, 0.5) / mpmath.qp(0.3 * 0.5**2.5, 0.5)
    assert abs(val - float(ref)) < 1e-13


def test_real_index_needs_float_mode():
    with pytest.raises(ExactModeUnsupported):
        q_pochhammer(Fraction(1, 3), Fraction(1, 2), math.inf, EX)


def test_q_number_is_symmetric():
    assert q_number(3, EX) == Fraction(21, 4)
    assert q_number(-3, EX) == -q_number(3, EX)


@pytest.mark.parametrize("n", range(7))
def test_gauss_binomial_theorem(n):
    # prod_{k<n} (1 + q^k x) = sum_k q^{k(k-1)/2} [n, k] x^k
    q, x = Fraction(1, 3), Fraction(2, 5)
    lhs = Fraction(1)
    for k in range(n):
        lhs *= 1 + q**k * x
    rhs = sum(q ** (k * (k - 1) // 2) * gauss_binomial_value(n, k, q) * x**k for k in range(n + 1))
    assert lhs == rhs


def test_gauss_binomial_at_one_is_binomial():
    for n in range(8):
        for k in range(n + 1):
            assert gauss_binomial(n, k).eval(1) == math.comb(n, k)


@pytest.mark.parametrize("x", [1, 2, 3, 4, 5])
def test_q_gamma_on_integers(x):
    q = Fraction(1, 2)
    expected = Fraction(1)
    for k in range(1, x):
        expected *= (1 - q**k) / (1 - q)
    assert q_gamma(x, EX) == expected


@pytest.mark.parametrize("x", [0.3, 1.7, 2.5])
def test_q_gamma_against_mpmath(x):
    assert abs(q_gamma(x, FL) - float(mpmath.qgamma(x, 0.5))) < 1e-12


def test_q_gamma_poles():
    with pytest.raises(PoleError):
        q_gamma(-2, FL)


def test_q_beta_relation():
    x, y = 1.3, 2.2
    assert abs(q_beta(x, y, FL) - q_gamma(x, FL) * q_gamma(y, FL) / q_gamma(x + y, FL)) < 1e-13


def test_jackson_integral_of_monomials():
    q = Fraction(1, 2)
    for k in range(5):
        coeffs = [0] * k + [1]
        assert jackson_integral(coeffs, 1, ctx=EX) == (1 - q) / (1 - q ** (k + 1))


def test_jackson_integral_callable_float():
    val = jackson_integral(lambda x: x**2, 1, ctx=FL)
    assert abs(val - 4 / 7) < 1e-14


@pytest.mark.parametrize("variant", ["minus", "plus", "symmetric"])
def test_q_diff_of_fourth_power(variant):
    q, x = Fraction(1, 2), Fraction(3)
    got = q_diff(lambda t: t**4, x, variant, EX)
    qn = (1 - q**4) / (1 - q)
    expected = {"minus": qn * x**3, "plus": qn * x**3 / q**4, "symmetric": (q**-4 - q**4) / (q**-1 - q) * x**3}[variant]
    assert got == expected


def test_q_diff_singular_at_zero():
    with pytest.raises(DomainError):
        q_diff(lambda t: t, 0, ctx=EX)


def test_terminating_hyper_matches_direct_sum():
    q = Fraction(1, 2)
    n = 3
    a, b, z = q**-n, Fraction(1, 3), Fraction(1, 2)
    c = Fraction(2, 5)
    direct = sum(brute_poch(a, q, k) * brute_poch(b, q, k) / (brute_poch(c, q, k) * brute_poch(q, q, k)) * z**k for k in range(n + 1))
    assert basic_hyper(HyperSpec((a, b), (c,), None, z), ctx=EX) == direct


@pytest.mark.parametrize("z", [0.2, -0.4, 0.7])
def test_nonterminating_hyper_against_mpmath(z):
    val = basic_hyper(HyperSpec((0.3, 0.6), (0.2,), 0.5, z), ctx=FL)
    ref = mpmath.qhyper([0.3, 0.6], [0.2], 0.5, z)
    assert abs(val - float(ref)) < 1e-12


@settings(max_examples=30)
@given(z=st.floats(-0.9, 0.9))
def test_q_exponentials_cancel(z):
    assert abs(q_exp(z, "small_e", FL) * q_exp(-z, "big_E", FL) - 1) < 1e-12


def test_small_e_outside_disc():
    with pytest.raises(DomainError):
        q_exp(1.5, "small_e", FL)
