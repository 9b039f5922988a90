"""Radial spectral theory of the invariant Laplacian.

Radial functions live on the grid ``x_j = q^(-2j)``, j = 0, 1, ...; the value
at index j is the weight-0 Fock entry ``M_0(j)`` of the corresponding disc
element.  The radial Laplacian is

    L psi(x) = [(1 - q^-2 x)(psi(q^-2 x) - psi(x)) - (1 - x)(psi(x) - psi(q^2 x))]
               / ((q^-1 - q)^2 x),

a Jacobi operator in the orthonormal basis ``e_j ~ q^j f_j``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import mpmath
import numpy as np

from ..context import QContext, format_scalar
from ..errors import DomainError, NonConvergenceError, PoleError, ValidationError
from ..qseries import HyperSpec, basic_hyper, q_gamma

__all__ = [
    "RadialFunction",
    "c_function",
    "c_function_2phi1",
    "fourier_forward",
    "fourier_inverse",
    "fourier_radial",
    "green_coefficient",
    "green_f0",
    "intertwining_a",
    "intertwining_fourier_coefficient",
    "jacobi_coefficients",
    "lambda_of",
    "lambda_of_rho",
    "laplacian_radial_apply",
    "laplacian_radial_matrix",
    "parseval_norms",
    "phi_l",
    "phi_l_grid",
    "rho_max",
    "sigma_density",
    "sigma_total_mass",
]


@dataclass(frozen=True)
class RadialFunction:
    """Values on the grid x_j = q^-2j, j = 0..N-1."""

    values: tuple
    q: object

    def to_json(self) -> dict:
        return {
            "grid": {"q": format_scalar(self.q), "N": len(self.values), "orientation": "x_j = q^(-2j)"},
            "values": [format_scalar(v) for v in self.values],
        }


def _float_ctx(ctx: QContext | None) -> QContext:
    if ctx is None:
        return QContext.floating()
    return ctx.to_float_context()


# ---------------------------------------------------------------------------
# the Jacobi operator
# ---------------------------------------------------------------------------


def jacobi_coefficients(N: int, ctx: QContext | None = None):
    """Diagonal a_0..a_{N-1} and off-diagonal b_0..b_{N-2} of L in the e_j basis."""
    ctx = ctx or QContext.exact()
    if N < 2:
        raise ValidationError(f"N: must be >= 2, got {N}")
    q2 = ctx.qpow(2)
    den = (ctx.one - q2) * (ctx.one - q2)
    a = [(ctx.one + q2 - 2 * ctx.qpow(2 * (j + 1))) / den for j in range(N)]
    b = [-ctx.q * (ctx.one - ctx.qpow(2 * (j + 1))) / den for j in range(N - 1)]
    return a, b


def laplacian_radial_matrix(N: int, ctx: QContext | None = None) -> np.ndarray:
    """The N x N truncation of the symmetric Jacobi matrix of L."""
    ctx = ctx or QContext.floating()
    a, b = jacobi_coefficients(N, ctx)
    if ctx.is_exact:
        M = np.empty((N, N), dtype=object)
        M[:, :] = ctx.zero
    else:
        M = np.zeros((N, N))
    for j in range(N):
        M[j, j] = a[j]
        if j + 1 < N:
            M[j, j + 1] = M[j + 1, j] = b[j]
    return M


def laplacian_radial_eigenvalues(N: int, ctx: QContext | None = None) -> np.ndarray:
    from scipy.linalg import eigvalsh_tridiagonal

    fctx = _float_ctx(ctx)
    a, b = jacobi_coefficients(N, fctx)
    return eigvalsh_tridiagonal(np.array(a, dtype=float), np.array(b, dtype=float))


def laplacian_radial_apply(values: Sequence, ctx: QContext | None = None) -> list:
    """Apply L to grid values.

    The value at index 0 uses the vanishing factor (1 - x_0).  Values beyond
    the last index are taken as zero, so the last entry is exact only for
    functions supported below it.
    """
    ctx = ctx or QContext.exact()
    psi = list(values)
    N = len(psi)
    if N < 2:
        raise ValidationError(f"values: need at least 2 grid points, got {N}")
    q, qi = ctx.q, ctx.qpow(-1)
    den0 = (qi - q) * (qi - q)
    out = []
    for j in range(N):
        x = ctx.qpow(-2 * j)
        x_next = ctx.qpow(-2 * (j + 1))
        up = psi[j + 1] if j + 1 < N else 0
        down = psi[j - 1] if j > 0 else 0
        term = (ctx.one - x_next) * (up - psi[j])
        if j > 0:
            term = term - (ctx.one - x) * (psi[j] - down)
        out.append(term / (den0 * x))
    return out


# ---------------------------------------------------------------------------
# eigenvalues and eigenfunctions
# ---------------------------------------------------------------------------


def lambda_of(l, ctx: QContext | None = None):
    """lambda(l) = (1 - q^-2l)(1 - q^(2l+2)) / (1 - q^2)^2."""
    ctx = ctx or QContext.floating()
    q2 = ctx.qpow(2)
    return (ctx.one - ctx.power(-2 * l)) * (ctx.one - ctx.power(2 * l + 2)) / ((ctx.one - q2) * (ctx.one - q2))


def lambda_of_rho(rho, ctx: QContext | None = None):
    """(1 - 2q cos(2 log(1/q) rho) + q^2) / (1 - q^2)^2, the value at l = -1/2 + i rho."""
    fctx = _float_ctx(ctx)
    q = fctx.q
    return (1 - 2 * q * np.cos(2 * math.log(1 / q) * np.asarray(rho)) + q * q) / (1 - q * q) ** 2


def rho_max(ctx: QContext | None = None) -> float:
    fctx = _float_ctx(ctx)
    return math.pi / (2 * math.log(1 / fctx.q))


def _phi_series(x, u, v, q2, j: int):
    """sum_k (x, u, v; q2)_k / (q2; q2)_k^2 q2^k, terminating after k = j."""
    total = 0
    term = 1
    p = 1
    for k in range(j + 1):
        total = total + term
        if k == j:
            break
        term = term * (1 - x * p) * (1 - u * p) * (1 - v * p) / ((1 - q2 * p) * (1 - q2 * p)) * q2
        p = p * q2
    return total


def _exact_params(l, ctx: QContext):
    try:
        return ctx.power(-2 * l), ctx.power(2 * l + 2)
    except Exception:
        return None


def phi_l(l, j: int, ctx: QContext | None = None, method: str = "series"):
    """Phi_l(x_j), the spherical eigenfunction normalized by Phi_l(1) = 1.

    ``method="series"`` sums the terminating series (exactly when q^-2l is
    an exact scalar, otherwise with mpmath at a precision that absorbs the
    cancellation).  ``method="recurrence"`` runs the eigen-equation forward
    in double precision.
    """
    ctx = ctx or QContext.floating()
    if j < 0:
        raise ValidationError(f"j: must be nonnegative, got {j}")
    if method == "recurrence":
        return phi_l_grid(l, j + 1, ctx, method="recurrence")[j]
    if method != "series":
        raise ValidationError(f"method: unknown method {method!r}")
    if ctx.is_exact:
        params = _exact_params(l, ctx)
        if params is None:
            raise ValidationError(f"l: q^(-2l) is not exact for l={l}; use a float context")
        u, v = params
        return _phi_series(ctx.qpow(-2 * j), u, v, ctx.qpow(2), j)
    q = float(ctx.q)
    digits = 30 + int(math.ceil(j * (j + 1) * math.log10(1 / q) + 2 * j * abs(complex(l).real) * math.log10(1 / q)))
    with mpmath.workdps(digits):
        mq = mpmath.mpf(q)
        lc = mpmath.mpc(complex(l))
        u = mpmath.power(mq, -2 * lc)
        v = mpmath.power(mq, 2 * lc + 2)
        val = _phi_series(mpmath.power(mq, -2 * j), u, v, mq * mq, j)
        val = complex(val)
    if isinstance(l, complex):
        return val
    return val.real


def phi_l_grid(l, N: int, ctx: QContext | None = None, method: str = "series"):
    """Phi_l at x_0..x_{N-1}.  ``l`` may be a numpy array for the recurrence."""
    ctx = ctx or QContext.floating()
    if method == "series":
        return [phi_l(l, j, ctx) for j in range(N)]
    if method != "recurrence":
        raise ValidationError(f"method: unknown method {method!r}")
    if ctx.is_exact and not isinstance(l, (np.ndarray, list, tuple)) and _exact_params(l, ctx) is not None:
        q, lam = ctx.q, lambda_of(l, ctx)
    else:
        fctx = _float_ctx(ctx)
        q = fctx.q
        lam = _lambda_np(l, q)
    c = (1 / q - q) ** 2
    out = [lam * 0 + 1]
    if N > 1:
        out.append(1 - (1 - q * q) * lam)
    for j in range(1, N - 1):
        x, x_next = q ** (-2 * j), q ** (-2 * (j + 1))
        nxt = out[j] + (lam * c * x * out[j] + (1 - x) * (out[j] - out[j - 1])) / (1 - x_next)
        out.append(nxt)
    return out[:N]


def _lambda_np(l, q):
    l = np.asarray(l, dtype=complex)
    lam = (1 - q ** (-2 * l)) * (1 - q ** (2 * l + 2)) / (1 - q * q) ** 2
    if np.all(np.abs(lam.imag) < 1e-14 * np.maximum(1, np.abs(lam.real))):
        lam = lam.real
    return lam


# ---------------------------------------------------------------------------
# c-function and Plancherel measure
# ---------------------------------------------------------------------------


def c_function(l, ctx: QContext | None = None):
    """c(l) = Gamma_{q^2}(2l + 1) / Gamma_{q^2}(l + 1)^2."""
    fctx = _float_ctx(ctx)
    q2 = fctx.q**2
    return q_gamma(2 * l + 1, fctx, base=q2) / q_gamma(l + 1, fctx, base=q2) ** 2


def c_function_2phi1(l, ctx: QContext | None = None):
    """The same value through 2phi1(q^-2l, q^-2l; q^2; q^2, q^(2(2l+1)))."""
    fctx = _float_ctx(ctx)
    q = fctx.q
    qc = complex(q)
    a = cmath.exp(-2 * l * cmath.log(qc)) if isinstance(l, complex) else q ** (-2 * l)
    z = cmath.exp(2 * (2 * l + 1) * cmath.log(qc)) if isinstance(l, complex) else q ** (2 * (2 * l + 1))
    return basic_hyper(HyperSpec([a, a], [q * q], q * q, z), ctx=fctx)


def sigma_density(rho, ctx: QContext | None = None, normalization: str = "unitary"):
    """Density of the Plancherel measure d sigma / d rho.

    ``normalization="unitary"`` (default) uses the prefactor
    ``log(1/q) / (pi (q^-2 - 1))`` that makes the radial Fourier transform
    with ``U f_0 = q^-2 - 1`` unitary.  ``"printed"`` uses
    ``log(1/q) / (pi (1 - q^2))``, which is larger by q^-2.
    """
    fctx = _float_ctx(ctx)
    q = fctx.q
    if normalization == "unitary":
        pref = math.log(1 / q) / (math.pi * (q**-2 - 1))
    elif normalization == "printed":
        pref = math.log(1 / q) / (math.pi * (1 - q * q))
    else:
        raise ValidationError(f"normalization: unknown value {normalization!r}")
    rhos = np.atleast_1d(np.asarray(rho, dtype=float))
    if np.any(rhos < -1e-15) or np.any(rhos > rho_max(fctx) + 1e-12):
        raise DomainError(f"rho: must lie in [0, {rho_max(fctx)}]")
    vals = np.array([pref * _inverse_c_sq(r, fctx) for r in rhos])
    return vals if np.ndim(rho) else float(vals[0])


def _inverse_c_sq(rho: float, fctx: QContext) -> float:
    # 1/|c|^2 has a removable zero where q-Gamma(2l+1) has a pole (rho = 0, rho_max)
    try:
        return (1 / (c_function(-0.5 + 1j * rho, fctx) * c_function(-0.5 - 1j * rho, fctx))).real
    except PoleError:
        return 0.0


def _gauss_nodes(n: int, hi: float):
    x, w = np.polynomial.legendre.leggauss(n)
    return (x + 1) * hi / 2, w * hi / 2


def _adaptive(integrand: Callable, hi: float, tol: float, n0: int = 16, nmax: int = 4096):
    """Gauss-Legendre with doubling until successive estimates agree within tol/10."""
    n = n0
    prev = None
    while n <= nmax:
        r, w = _gauss_nodes(n, hi)
        est = integrand(r, w)
        if prev is not None and np.max(np.abs(np.asarray(est) - np.asarray(prev))) < tol / 10:
            return est, n
        prev = est
        n *= 2
    raise NonConvergenceError(f"quadrature: no convergence with {nmax} nodes")


def sigma_total_mass(ctx: QContext | None = None, normalization: str = "unitary", tol: float = 1e-12) -> float:
    fctx = _float_ctx(ctx)
    dens = _density_cache(fctx, normalization)
    val, _ = _adaptive(lambda r, w: float(np.dot(w, dens(r))), rho_max(fctx), tol)
    return val


def _density_cache(fctx: QContext, normalization: str):
    cache: dict = {}

    def dens(r):
        key = (len(r), float(r[0]))
        if key not in cache:
            cache[key] = sigma_density(r, fctx, normalization)
        return cache[key]

    return dens


# ---------------------------------------------------------------------------
# radial Fourier transform
# ---------------------------------------------------------------------------


def fourier_forward(values: Sequence, rho, ctx: QContext | None = None):
    """U f(rho) = (q^-2 - 1) sum_j f(x_j) Phi_{-1/2 + i rho}(x_j) x_j for finitely supported f."""
    fctx = _float_ctx(ctx)
    q = fctx.q
    vals = [complex(v) if isinstance(v, complex) else float(v) for v in values]
    r = np.asarray(rho, dtype=float)
    phis = phi_l_grid(-0.5 + 1j * r, len(vals), fctx, method="recurrence")
    total = np.zeros_like(r, dtype=complex if any(isinstance(v, complex) for v in vals) else float)
    for j, v in enumerate(vals):
        total = total + v * np.real(phis[j]) * q ** (-2 * j)
    return (q**-2 - 1) * total


def fourier_inverse(
    transform: Callable, N: int, ctx: QContext | None = None, tol: float = 1e-10, normalization: str = "unitary"
):
    """Grid values f(x_j), j < N, of int_0^rho_max F(rho) Phi_{-1/2+i rho}(x_j) d sigma(rho)."""
    fctx = _float_ctx(ctx)
    dens = _density_cache(fctx, normalization)

    def integrand(r, w):
        F = np.asarray(transform(r))
        phis = phi_l_grid(-0.5 + 1j * r, N, fctx, method="recurrence")
        dw = w * dens(r)
        return np.array([np.dot(dw, F * np.real(phis[j])) for j in range(N)])

    est, _ = _adaptive(integrand, rho_max(fctx), tol)
    return est


def fourier_radial(values: Sequence, rho=None, direction: str = "forward", ctx: QContext | None = None, N=None, tol=1e-10):
    """Forward transform at rho, or the quadrature round trip back to the grid."""
    if direction == "forward":
        if rho is None:
            raise ValidationError("rho: required for the forward transform")
        return fourier_forward(values, rho, ctx)
    if direction == "inverse":
        N = N or len(values)
        return fourier_inverse(lambda r: fourier_forward(values, r, ctx), N, ctx, tol)
    raise ValidationError(f"direction: unknown value {direction!r}")


def parseval_norms(values: Sequence, ctx: QContext | None = None, tol: float = 1e-10):
    """(||f||^2 on the grid, int |U f|^2 d sigma)."""
    fctx = _float_ctx(ctx)
    q = fctx.q
    grid_norm = (q**-2 - 1) * sum(abs(complex(v)) ** 2 * q ** (-2 * j) for j, v in enumerate(values))
    dens = _density_cache(fctx, "unitary")
    val, _ = _adaptive(
        lambda r, w: float(np.dot(w * dens(r), np.abs(fourier_forward(values, r, fctx)) ** 2)), rho_max(fctx), tol
    )
    return grid_norm, val


# ---------------------------------------------------------------------------
# Green function
# ---------------------------------------------------------------------------


def green_coefficient(m: int, ctx: QContext | None = None):
    """(q^-2 - 1) / (q^-2m - 1)."""
    ctx = ctx or QContext.exact()
    if m < 1:
        raise ValidationError(f"m: must be >= 1, got {m}")
    return (ctx.qpow(-2) - 1) / (ctx.qpow(-2 * m) - 1)


def green_f0(M: int, N: int = 21, ctx: QContext | None = None) -> list:
    """psi_M(x_j) = (1 - q^2) sum_{m=1..M} c_m x_j^-m for j < N."""
    ctx = ctx or QContext.exact()
    if M < 1:
        raise ValidationError(f"M: must be >= 1, got {M}")
    coeffs = [green_coefficient(m, ctx) for m in range(1, M + 1)]
    pref = ctx.one - ctx.qpow(2)
    out = []
    for j in range(N):
        total = ctx.zero
        for m, c in enumerate(coeffs, start=1):
            total = total + c * ctx.qpow(2 * j * m)
        out.append(pref * total)
    return out


# ---------------------------------------------------------------------------
# intertwining operators
# ---------------------------------------------------------------------------


def _qp(ctx: QContext, x):
    if isinstance(x, complex) and not ctx.is_exact:
        return cmath.exp(x * math.log(ctx.q))
    return ctx.power(x)


def intertwining_a(l, n: int, ctx: QContext | None = None):
    """The eigenvalue factor a(l, n); the product runs over j = 0..|n|-1."""
    ctx = ctx or QContext.floating()
    if isinstance(l, (int, Fraction)) and l < 0 and Fraction(l).denominator == 1:
        raise PoleError(f"l: a(l, n) is undefined at negative integers, got {l}")
    out = _qp(ctx, -(2 * l + 1) * n)
    for j in range(abs(n)):
        if n > 0:
            e_num, e_den = n - l - j - 1, n + l - j
        else:
            e_num, e_den = n + l + j + 1, n - l + j
        den = _qp(ctx, -e_den) - _qp(ctx, e_den)
        if den == 0 or (not ctx.is_exact and abs(den) < 1e-300):
            raise PoleError(f"l, n: vanishing factor in a({l}, {n})")
        out = out * (_qp(ctx, -e_num) - _qp(ctx, e_num)) / den
    return out


def intertwining_fourier_coefficient(l, n: int, ctx: QContext | None = None, tol: float = 1e-15):
    """The n-th Fourier coefficient of the kernel (e^{iu}; q^2)_l (q^2 e^{-iu}; q^2)_l.

    With A_k = (q^-2l; q^2)_k / (q^2; q^2)_k it equals
    sum_{k >= max(0, -n)} A_{k+n} A_k q^(2l(2k+n)) q^(2k).
    """
    fctx = _float_ctx(ctx)
    q = fctx.q
    q2 = q * q
    lc = complex(l)
    u = cmath.exp(-2 * lc * math.log(q))
    w = cmath.exp(2 * lc * math.log(q))

    def A(k):
        r = 1
        p = 1
        for _ in range(k):
            r *= (1 - u * p) / (1 - q2 * p)
            p *= q2
        return r

    total = 0
    k = max(0, -n)
    a_kn, a_k = A(k + n), A(k)
    small = 0
    while k < fctx.max_terms:
        term = a_kn * a_k * w ** (2 * k + n) * q2**k
        total += term
        if abs(term) < tol * max(1.0, abs(total)):
            small += 1
            if small >= 3:
                break
        else:
            small = 0
        a_kn *= (1 - u * q2 ** (k + n)) / (1 - q2 ** (k + n + 1))
        a_k *= (1 - u * q2**k) / (1 - q2 ** (k + 1))
        k += 1
    else:
        raise NonConvergenceError("intertwining_fourier_coefficient: no convergence")
    return total.real if not isinstance(l, complex) else total
