import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qharmonic import NonFiniteElementError, QContext, ValidationError
from qharmonic.ncgroebner import preset_algebra
from qharmonic.ncgroebner import parse_poly
from qharmonic.qdisc import (
    act_generator,
    fock_matrix,
    invariant_integral,
    laplacian_apply,
    laplacian_radial_apply,
    pol_normal_form,
    random_finite_element,
    random_polynomial_element,
)
from qharmonic.qdisc.element import PolElement

EX = QContext.exact("1/2")
Q2 = Fraction(1, 4)
seeds = st.integers(0, 10**6)


def shift_matrices(N):
    """z and z* on v_n = z^n e_0, written out by hand."""
    Z = np.full((N, N), Fraction(0), dtype=object)
    Zs = np.full((N, N), Fraction(0), dtype=object)
    for n in range(N - 1):
        Z[n + 1, n] = Fraction(1)
    for n in range(1, N):
        Zs[n - 1, n] = 1 - Q2**n
    return Z, Zs


def test_defining_relation():
    z, zs, one = PolElement.z(EX), PolElement.zs(EX), PolElement.one(EX)
    assert zs * z == (z * zs).scale(Q2) + one.scale(1 - Q2)
    assert PolElement.y(EX) == one - z * zs


@pytest.mark.parametrize("a,b", [(0, 0), (1, 0), (0, 1), (2, 1), (1, 3), (3, 3)])
def test_monomials_against_hand_written_shifts(a, b):
    N, safe = 12, 12 - max(a, b)
    Z, Zs = shift_matrices(N)
    expected = np.linalg.matrix_power(Z, a) @ np.linalg.matrix_power(Zs, b) if a or b else np.eye(N, dtype=object)
    got = fock_matrix(PolElement.monomial(EX, a, b), N, basis="monomial")
    for i in range(safe):
        for j in range(safe):
            assert got[i, j] == expected[i, j]


@settings(max_examples=25, deadline=None)
@given(seed=seeds)
def test_fock_is_multiplicative(seed):
    rng = random.Random(seed)
    f = random_polynomial_element(rng, EX)
    g = random_finite_element(rng, EX)
    N = 16
    F, G, FG = (fock_matrix(x, N, basis="monomial") for x in (f, g, f * g))
    prod = F @ G
    safe = N - 8
    assert all(FG[i, j] == prod[i, j] for i in range(safe) for j in range(safe))


@settings(max_examples=25, deadline=None)
@given(seed=seeds)
def test_multiplication_is_associative(seed):
    rng = random.Random(seed)
    f, g, h = (random_polynomial_element(rng, EX, max_deg=2) for _ in range(3))
    assert (f * g) * h == f * (g * h)


@settings(max_examples=20, deadline=None)
@given(seed=seeds)
def test_actions_obey_twisted_leibniz_rules(seed):
    rng = random.Random(seed)
    f, g = random_polynomial_element(rng, EX), random_finite_element(rng, EX)
    A = act_generator
    assert A("K", f * g) == A("K", f) * A("K", g)
    assert A("E", f * g) == A("E", f) * g + A("K", f) * A("E", g)
    assert A("F", f * g) == A("F", f) * A("Kinv", g) + f * A("F", g)


@settings(max_examples=20, deadline=None)
@given(seed=seeds)
def test_quantum_group_relations(seed):
    f = random_finite_element(random.Random(seed), EX)
    A = act_generator
    q = EX.q
    assert A("K", A("E", f)) == A("E", A("K", f)).scale(Q2)
    assert A("K", A("F", f)) == A("F", A("K", f)).scale(1 / Q2)
    assert A("K", A("Kinv", f)) == f
    lhs = A("E", A("F", f)) - A("F", A("E", f))
    rhs = (A("K", f) - A("Kinv", f)).scale(1 / (q - 1 / q))
    assert lhs == rhs


@settings(max_examples=20, deadline=None)
@given(seed=seeds)
def test_integral_is_invariant(seed):
    f = random_finite_element(random.Random(seed), EX)
    assert invariant_integral(act_generator("E", f)) == 0
    assert invariant_integral(act_generator("F", f)) == 0
    assert invariant_integral(act_generator("K", f)) == invariant_integral(f)


def test_integral_of_projectors():
    for j in range(5):
        assert invariant_integral(PolElement.f(EX, j)) == (1 - Q2) * Q2**-j


def test_integral_rejects_polynomials():
    with pytest.raises(NonFiniteElementError):
        invariant_integral(PolElement.z(EX) * PolElement.zs(EX))


def test_adjoint_swaps_generators_and_reverses_products():
    z, zs = PolElement.z(EX), PolElement.zs(EX)
    assert z.adjoint() == zs
    f = z * z * zs + zs.scale(Fraction(3))
    g = zs * z + z
    assert (f * g).adjoint() == g.adjoint() * f.adjoint()


def test_radial_laplacian_two_routes():
    vals = [Fraction(j * j - 3, j + 1) for j in range(12)]
    lap = laplacian_apply(PolElement.radial(EX, vals))
    rad = laplacian_radial_apply(vals + [0], EX)
    assert all(lap.value(0, j) == rad[j] for j in range(11))


def test_normal_form_matches_element_arithmetic():
    A, _ = preset_algebra("pol_disc", EX)
    p = parse_poly("zs*z*z - 3*z", A)
    z, zs = PolElement.z(EX), PolElement.zs(EX)
    assert pol_normal_form(p, EX) == zs * z * z - z.scale(3)


def test_decompose_round_trip():
    f = PolElement.monomial(EX, 2, 1).scale(Fraction(2, 3)) + PolElement.monomial(EX, 0, 3)
    parts = f.decompose()
    rebuilt = PolElement.zero(EX)
    for (a, b), c in parts.items():
        rebuilt = rebuilt + PolElement.monomial(EX, a, b).scale(c)
    assert rebuilt == f


def test_bad_constructors():
    with pytest.raises(ValidationError):
        PolElement.f(EX, -1)
    with pytest.raises(ValidationError):
        PolElement.monomial(EX, -1, 0)
    with pytest.raises(ValidationError):
        act_generator("X", PolElement.z(EX))
