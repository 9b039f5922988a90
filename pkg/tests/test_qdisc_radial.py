from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qharmonic import PoleError, QContext, ValidationError
from qharmonic.qdisc import (
    c_function,
    c_function_2phi1,
    fourier_radial,
    green_coefficient,
    green_f0,
    intertwining_a,
    intertwining_fourier_coefficient,
    jacobi_coefficients,
    lambda_of,
    lambda_of_rho,
    laplacian_radial_apply,
    laplacian_radial_eigenvalues,
    laplacian_radial_matrix,
    parseval_norms,
    phi_l,
    phi_l_grid,
    rho_max,
    sigma_density,
    sigma_total_mass,
)

EX = QContext.exact("1/2")
FL = QContext.floating(0.5)


def test_matrix_and_stencil_agree():
    N = 8
    M = laplacian_radial_matrix(N, EX)
    for k in range(N - 1):
        e = [Fraction(0)] * N
        e[k] = Fraction(1)
        col = laplacian_radial_apply(e, EX)
        # the matrix is the stencil conjugated by diag(q^-j), which makes it symmetric
        for j in range(N - 1):
            assert col[j] * EX.qpow(k) == M[j, k] * EX.qpow(j)
            assert M[j, k] == M[k, j]


def test_jacobi_coefficients_shape():
    a, b = jacobi_coefficients(5, EX)
    assert len(a) == 5 and len(b) == 4
    assert all(x < 0 for x in b)


def test_spectrum_lies_in_the_band():
    ev = laplacian_radial_eigenvalues(400, FL)
    assert ev.min() >= 4 / 9 - 1e-6 and ev.max() <= 4 + 1e-6
    # the band edges are the values of lambda on the unitary line
    assert abs(lambda_of_rho(0.0, FL) - 4 / 9) < 1e-14
    assert abs(lambda_of_rho(rho_max(FL), FL) - 4) < 1e-12


@pytest.mark.parametrize("l", [Fraction(1), Fraction(2), Fraction(1, 2), Fraction(3, 2)])
def test_lambda_symmetry(l):
    assert lambda_of(l, EX) == lambda_of(-1 - l, EX)


@settings(max_examples=30)
@given(rho=st.floats(0, 2.2))
def test_lambda_on_the_unitary_line(rho):
    l = complex(-0.5, rho)
    assert abs(lambda_of(l, FL) - lambda_of_rho(rho, FL)) < 1e-12


@pytest.mark.parametrize("l", [1, 2, 3])
def test_integer_eigenfunctions_are_exact(l):
    phis = phi_l_grid(Fraction(l), 15, EX)
    res = laplacian_radial_apply(phis, EX)
    lam = lambda_of(l, EX)
    assert phis[0] == 1
    assert all(res[j] == lam * phis[j] for j in range(14))


def test_complex_eigenfunction_residual():
    l = complex(-0.5, 0.4)
    phis = phi_l_grid(l, 40, FL)
    res = laplacian_radial_apply(phis, FL)
    lam = lambda_of(l, FL)
    assert max(abs(res[j] - lam * phis[j]) for j in range(1, 39)) < 1e-10


@pytest.mark.parametrize("l", [Fraction(1), Fraction(1, 2)])
def test_series_and_recurrence_agree(l):
    for j in range(10):
        assert phi_l(l, j, EX, "series") == phi_l(l, j, EX, "recurrence")
        assert phi_l(l, j, EX) == phi_l(-1 - l, j, EX)


@pytest.mark.parametrize("l", [0.3, 0.7, 1.5])
def test_c_function_two_routes(l):
    assert abs(c_function_2phi1(l) - c_function(l)) < 1e-10


def test_c_function_against_mpmath_series():
    # 2phi1(q^-2l, q^-2l; q^2; q^2, q^(2(2l+1))) summed by mpmath
    l, q2 = 0.7, 0.25
    a = q2**-l
    ref = mpmath.qhyper([a, a], [q2], q2, q2 ** (2 * l + 1))
    assert abs(c_function(l) - float(ref)) < 1e-12


def test_eigenfunction_asymptotics():
    x = phi_l(Fraction(1, 2), 60, EX)
    assert abs(float(EX.qpow(60) * x) - c_function(0.5)) < 1e-4


def test_green_function_inverts_the_laplacian():
    g = green_f0(60, 22, FL)
    Lg = laplacian_radial_apply(g, FL)
    assert max(abs(Lg[j] - (1 if j == 0 else 0)) for j in range(21)) < 1e-8


def test_green_coefficients():
    assert green_coefficient(1, EX) == 1
    assert green_coefficient(2, EX) == Fraction(1, 5)
    with pytest.raises(ValidationError):
        green_coefficient(0, EX)


def test_plancherel_measure_is_a_probability_on_f0_scale():
    # ||f0||^2 = q^-2 - 1 and U f0 is constant, so sigma has total mass 1/(q^-2 - 1)
    assert abs(sigma_total_mass(FL) - 1 / 3) < 1e-10


@pytest.mark.parametrize("f", [[1], [0, 1], [1, 0, 0, 2]])
def test_fourier_round_trip_and_parseval(f):
    back = fourier_radial(f, direction="inverse", ctx=FL, N=6)
    assert np.max(np.abs(np.asarray(back) - np.array(f + [0] * (6 - len(f))))) < 1e-6
    a, b = parseval_norms(f, FL)
    assert abs(a - b) < 1e-6


def test_intertwining_normalization_and_poles():
    for l in (0.3, 0.7):
        assert intertwining_a(l, 0, FL) == 1
    assert intertwining_a(Fraction(1, 2), 0, EX) == 1
    with pytest.raises(PoleError):
        intertwining_a(-2, 1, EX)


@pytest.mark.parametrize("l", [0.3, 0.7])
@pytest.mark.parametrize("n", [-2, -1, 1, 2])
def test_intertwining_against_kernel_fourier_coefficients(l, n):
    ratio = intertwining_fourier_coefficient(l, n, FL) / (c_function(l) * 0.5 ** (2 * l * n))
    assert abs(ratio - intertwining_a(l, n, FL)) < 1e-10


def test_density_vanishes_at_the_band_edges():
    # q-Gamma(2l+1) has a pole at rho = 0, so 1/|c|^2 vanishes there like rho^2
    assert sigma_density(0.0, FL) == 0.0
    assert 0 < sigma_density(1e-4, FL) < 1e-6
    assert sigma_density(rho_max(FL), FL) < 1e-10
    assert abs(sigma_density(1.0, FL, "printed") / sigma_density(1.0, FL) - 4) < 1e-12
