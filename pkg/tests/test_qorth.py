from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qharmonic import DomainError, QContext, ValidationError
from qharmonic.qorth import FamilySpec, orth_eval, orth_gram, orth_norm, orth_weight

EX = QContext.exact("1/2")
FL = QContext.floating(0.5)
small = st.fractions(min_value=Fraction(-9, 10), max_value=Fraction(9, 10), max_denominator=10)


def poch(a, q, n):
    out = Fraction(1)
    for k in range(n):
        out *= 1 - a * q**k
    return out


@settings(max_examples=25, deadline=None)
@given(a=small, b=small, n=st.integers(0, 6), x=small)
def test_al_salam_chihara_explicit_equals_recurrence(a, b, n, x):
    spec = FamilySpec("al_salam_chihara", (a, b))
    assert orth_eval(spec, n, x, "explicit", EX) == orth_eval(spec, n, x, "recurrence", EX)


@settings(max_examples=15, deadline=None)
@given(a=small, b=small, c=small, n=st.integers(0, 5), x=small)
def test_cont_dual_q_hahn_explicit_equals_recurrence(a, b, c, n, x):
    spec = FamilySpec("cont_dual_q_hahn", (a, b, c))
    assert orth_eval(spec, n, x, "explicit", EX) == orth_eval(spec, n, x, "recurrence", EX)


@pytest.mark.parametrize("n", range(6))
def test_askey_wilson_explicit_equals_recurrence(n):
    spec = FamilySpec("askey_wilson", (Fraction(1, 3), Fraction(1, 5), Fraction(-1, 7), Fraction(1, 11)))
    x = Fraction(2, 9)
    assert orth_eval(spec, n, x, "explicit", EX) == orth_eval(spec, n, x, "recurrence", EX)


@pytest.mark.parametrize("n", range(6))
def test_little_q_jacobi_explicit_equals_recurrence(n):
    spec = FamilySpec("little_q_jacobi", (Fraction(1, 3), Fraction(1, 5)))
    x = Fraction(1, 8)
    assert orth_eval(spec, n, x, "explicit", EX) == orth_eval(spec, n, x, "recurrence", EX)


def test_little_q_jacobi_orthogonal_under_jackson_weight():
    # weight at x = q^k: (bq;q)_k / (q;q)_k (aq)^k, summed to float precision
    a, b, q = 0.3, 0.2, 0.5
    spec = FamilySpec("little_q_jacobi", (a, b))

    def w(k):
        num = den = 1.0
        for i in range(k):
            num *= 1 - b * q ** (i + 1)
            den *= 1 - q ** (i + 1)
        return num / den * (a * q) ** k

    for m in range(4):
        for n in range(m + 1, 4):
            s = sum(w(k) * orth_eval(spec, m, q**k, "explicit", FL) * orth_eval(spec, n, q**k, "explicit", FL) for k in range(80))
            assert abs(s) < 1e-12


def test_q_hahn_gram_is_the_weighted_grid_sum():
    # support q^-x, x = 0..N, weight (alpha q, q^-N; q)_x / (q, q^-N / beta; q)_x (alpha beta q)^-x
    q, al, be, N = Fraction(1, 2), Fraction(1, 2), Fraction(1, 2), 3
    spec = FamilySpec("q_hahn", (al, be, N))

    def w(x):
        return poch(al * q, q, x) * poch(q**-N, q, x) / (poch(q, q, x) * poch(q**-N / be, q, x)) / (al * be * q) ** x

    for x in range(N + 1):
        assert orth_weight(spec, x, EX) == w(x)
    for m in range(4):
        for n in range(4):
            direct = sum(w(x) * orth_eval(spec, m, q**-x, "explicit", EX) * orth_eval(spec, n, q**-x, "explicit", EX) for x in range(N + 1))
            assert orth_gram(spec, m, n, EX) == direct
            if m != n:
                assert direct == 0


def test_q_hahn_norm_matches_gram_diagonal():
    spec = FamilySpec("q_hahn", (Fraction(1, 2), Fraction(1, 2), 3))
    for n in range(4):
        assert orth_norm(spec, n, EX) == orth_gram(spec, n, n, EX)


def test_al_salam_chihara_quadrature_orthogonality():
    spec = FamilySpec("al_salam_chihara", (0.3, -0.2))
    for m in range(4):
        for n in range(4):
            g = orth_gram(spec, m, n, FL)
            if m == n:
                assert abs(g - orth_norm(spec, n, FL)) < 1e-8 * abs(g)
            else:
                assert abs(g) < 1e-8


def test_polynomials_at_degree_zero_are_one():
    for fam, p in [("al_salam_chihara", (Fraction(1, 3), Fraction(1, 5))), ("little_q_jacobi", (Fraction(1, 3), Fraction(1, 5)))]:
        assert orth_eval(FamilySpec(fam, p), 0, Fraction(1, 7), "explicit", EX) == 1


def test_parameter_validation():
    with pytest.raises(ValidationError):
        FamilySpec("nope", ())
    with pytest.raises(ValidationError):
        FamilySpec("al_salam_chihara", (1,))
    with pytest.raises(DomainError):
        FamilySpec("al_salam_chihara", (Fraction(3, 2), 0)).validate(EX)
    with pytest.raises(DomainError):
        FamilySpec("q_hahn", (Fraction(1, 2), Fraction(1, 2), 0)).validate(EX)


@pytest.mark.parametrize("family,arity", [("askey_wilson", 4), ("al_salam_chihara", 2), ("cont_dual_q_hahn", 3)])
def test_all_zero_parameters_give_q_hermite(family, arity):
    # H_2(x | q) = 4x^2 - (1 - q)
    spec = FamilySpec(family, (Fraction(0),) * arity)
    x = Fraction(1, 3)
    for mode in ("explicit", "recurrence"):
        assert orth_eval(spec, 2, x, mode, EX) == 4 * x * x - Fraction(1, 2)


def test_zero_leading_parameter_is_a_removable_singularity():
    x = Fraction(1, 5)
    a = FamilySpec("cont_dual_q_hahn", (Fraction(0), Fraction(1, 3), Fraction(-1, 4)))
    b = FamilySpec("cont_dual_q_hahn", (Fraction(1, 3), Fraction(0), Fraction(-1, 4)))
    for n in range(5):
        assert orth_eval(a, n, x, "explicit", EX) == orth_eval(b, n, x, "recurrence", EX)
