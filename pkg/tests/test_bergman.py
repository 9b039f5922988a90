import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qharmonic import DomainError, QContext
from qharmonic.bergman import (
    berezin_product_formula,
    berezin_radial,
    bergman_kernel_coeff,
    covariant_symbol_matrix,
    f0_expansion,
    f0_symbol_sum,
    monomial_norm,
    p_apply,
    p_poly,
    p_values,
    star_product,
    star_series_product,
    toeplitz_matrix,
)
from qharmonic.qdisc import laplacian_radial_apply, random_polynomial_element
from qharmonic.qdisc.element import PolElement

EX = QContext.exact("1/2")
FL = QContext.floating(0.5)
Q2 = Fraction(1, 4)


def poch(a, b, n):
    out = Fraction(1)
    for k in range(n):
        out *= 1 - a * b**k
    return out


@pytest.mark.parametrize("lam", [Fraction(2), Fraction(3), Fraction(5, 2)])
def test_monomial_norms(lam):
    q2lam = Q2 ** int(lam) if lam.denominator == 1 else None
    for n in range(8):
        norm = monomial_norm(n, lam, EX)
        assert norm * bergman_kernel_coeff(n, lam, EX) == 1
        if q2lam is not None:
            assert norm == poch(Q2, Q2, n) / poch(q2lam, Q2, n)


def test_lambda_must_exceed_one():
    with pytest.raises(DomainError):
        monomial_norm(1, 1, EX)


@pytest.mark.parametrize("lam", [2, 3])
def test_toeplitz_z_star_is_the_adjoint_of_z(lam):
    # <T_z* z^n, z^(n-1)> = <z^n, T_z z^(n-1)> in the weighted inner product
    N = 10
    Tz = toeplitz_matrix("z", lam, N, EX)
    Tzs = toeplitz_matrix("z_star", lam, N, EX)
    for n in range(1, N):
        assert Tzs[n - 1, n] * monomial_norm(n - 1, lam, EX) == Tz[n, n - 1] * monomial_norm(n, lam, EX)


def test_radial_symbol_matches_y_powers():
    lam, N = 3, 8
    for k in (1, 2, 3):
        exact = toeplitz_matrix(("y_power", k), lam, N, EX)
        jackson = toeplitz_matrix(("radial", lambda y, k=k: y**k), lam, N, FL)
        assert np.max(np.abs(np.diag(jackson) - np.array([float(exact[n, n]) for n in range(N)]))) < 1e-12


def test_covariant_symbols_of_products_multiply_operators():
    # the covariant symbol of T_z T_z* has the table {(1,1): 1}
    lam, N = 2, 8
    Tz, Tzs = toeplitz_matrix("z", lam, N, EX), toeplitz_matrix("z_star", lam, N, EX)
    got = covariant_symbol_matrix({(1, 1): Fraction(1)}, lam, N, EX)
    prod = Tz @ Tzs
    assert all(got[i, j] == prod[i, j] for i in range(N - 1) for j in range(N - 1))


@pytest.mark.parametrize("j", range(6))
def test_p_polynomials_explicit_and_recurrence(j):
    for x in (Fraction(1, 3), Fraction(-2, 7), Fraction(5)):
        explicit = sum(c * x**i for i, c in enumerate(p_poly(j, EX)))
        assert explicit == p_values(j, x, EX)[j]


@pytest.mark.parametrize("j", range(7))
def test_p_of_laplacian_moves_f0_to_fj(j):
    N = 12
    f0 = [Fraction(1)] + [Fraction(0)] * (N - 1)
    got = p_apply(j, f0, EX, op=lambda v: laplacian_radial_apply(v, EX))
    expected = [Q2**j if i == j else 0 for i in range(N)]
    assert all(got[i] == expected[i] for i in range(N - j - 1))


@pytest.mark.parametrize("lam", [Fraction(2), Fraction(5, 2), Fraction(3)])
def test_f0_symbol_identity(lam):
    for j in range(9):
        assert f0_symbol_sum(j, lam, EX) == (1 if j == 0 else 0)


@pytest.mark.parametrize("lam", [3, 4])
def test_berezin_two_routes(lam):
    series, _, tail = berezin_radial([1], lam, ctx=FL, N=10)
    product = berezin_product_formula([1], lam, M=40, ctx=FL)
    assert tail < 1e-10
    assert max(abs(a - b) for a, b in zip(series, product)) < 1e-8


def test_berezin_tends_to_identity_for_large_weight():
    series, _, _ = berezin_radial([1], 40, ctx=FL, N=4)
    assert abs(series[0] - 1) < 1e-10 and max(abs(v) for v in series[1:]) < 1e-10


def test_f0_expansion_is_the_vacuum_projector_below_its_order():
    K = 5
    f = f0_expansion(K, EX)
    assert f.weights() == [0]
    assert [f.value(0, n) for n in range(K + 1)] == [1] + [0] * K


def _elements():
    z, zs = PolElement.z(EX), PolElement.zs(EX)
    return z, zs, PolElement.one(EX)


def test_star_product_zeroth_order_is_the_product():
    rng = random.Random(4)
    for _ in range(5):
        f, g = random_polynomial_element(rng, EX, 2, 2), random_polynomial_element(rng, EX, 2, 2)
        assert star_product(f, g, 1)[0] == f * g


def test_star_product_toeplitz_commutation():
    # z* * z = q^2 z z* + 1 - q^2 + (1 - q^2) t / (1 - t) (1 - z* * z) * (1 - z z*)
    z, zs, one = _elements()
    K, cache = 4, {}
    X = star_product(zs, z, K, cache)
    one_minus_X = [one - X[0]] + [-c for c in X[1:]]
    c = [Fraction(0)] + [1 - Q2] * K
    for left, right in ((one_minus_X, [one - z * zs]), ([one - z * zs], one_minus_X)):
        P = star_series_product(left, right, K, cache)
        rhs = [(z * zs).scale(Q2) + one.scale(1 - Q2)] + [PolElement.zero(EX)] * K
        for i in range(1, K + 1):
            for j in range(K + 1 - i):
                rhs[i + j] = rhs[i + j] + P[j].scale(c[i])
        assert list(X) == rhs


@settings(max_examples=10, deadline=None)
@given(seed=st.integers(0, 10**6))
def test_star_product_is_associative(seed):
    rng = random.Random(seed)
    f, g, h = (random_polynomial_element(rng, EX, 1, 2) for _ in range(3))
    K, cache = 2, {}
    lhs = star_series_product(star_product(f, g, K, cache), [h], K, cache)
    rhs = star_series_product([f], star_product(g, h, K, cache), K, cache)
    assert list(lhs) == list(rhs)


def test_star_unit():
    z, zs, one = _elements()
    for f in (z, zs, z * zs):
        for s in (star_product(one, f, 3), star_product(f, one, 3)):
            assert s[0] == f and all(c.is_zero() for c in s[1:])


def test_star_series_json():
    # z* * z = (1 - q^2 y) + t (1 - q^2) q^2 y^2 + O(t^2) with y = 1 - z z*
    z, zs, _ = _elements()
    data = star_product(zs, z, 1).to_json()
    assert data == [
        {"power": 0, "coefficient": {"0": {"poly_in_y": ["1", "-1/4"], "grid": {}}}},
        {"power": 1, "coefficient": {"0": {"poly_in_y": ["0", "0", "3/16"], "grid": {}}}},
    ]
