"""Weighted Bergman spaces, Toeplitz operators, covariant symbols, the
Berezin transform and the Berezin star product on the quantum disc.

Toeplitz matrices are written in the monomial basis {z^n} of the Bergman
space with weight lambda > 1; the shift ``t = q^(2(lambda - 1))`` is the
deformation parameter of the star product.

The polynomials p_j used throughout are

    p_j(x) = sum_{k<=j} (q^-2j; q^2)_k / (q^2; q^2)_k^2 * q^2k
             * prod_{i<k} (1 + q^2i ((1 - q^2)^2 x - 1 - q^2) + q^(4i+2)),

equivalently the three-term recurrence

    p_{j+1} = [(u - 2 q^(2j+2)) p_j - q^2 (1 - q^2j) p_{j-1}] / (1 - q^(2j+2)),
    u = 1 + q^2 - (1 - q^2)^2 x.
"""

from __future__ import annotations

from typing import Callable, Sequence

import numpy as np

from .context import QContext
from .errors import DomainError, NonConvergenceError, ValidationError
from .qdisc.element import PolElement, _padd, _pmul, _pscale, laplacian_apply
from .qdisc.radial import jacobi_coefficients, laplacian_radial_apply

__all__ = [
    "StarSeries",
    "berezin_product_formula",
    "berezin_radial",
    "bergman_kernel_coeff",
    "covariant_symbol_matrix",
    "f0_expansion",
    "f0_symbol_sum",
    "monomial_norm",
    "p_apply",
    "p_poly",
    "p_values",
    "star_product",
    "star_series_product",
    "toeplitz_matrix",
    "y_lambda_expansion",
]


def _check_lambda(lam):
    if not (float(lam) > 1):
        raise DomainError(f"lam: must be > 1, got {lam}")


def _ql(ctx: QContext, x):
    """q**x for the real exponent x (exact when 2x is an integer)."""
    return ctx.power(x)


def _poch(a, b, n):
    r = a * 0 + 1
    f = a
    for _ in range(n):
        r = r * (1 - f)
        f = f * b
    return r


# ---------------------------------------------------------------------------
# norms and kernel
# ---------------------------------------------------------------------------


def monomial_norm(n: int, lam, ctx: QContext | None = None):
    """||z^n||^2 = (q^2; q^2)_n / (q^(2 lambda); q^2)_n."""
    ctx = ctx or QContext.exact()
    _check_lambda(lam)
    if n < 0:
        raise ValidationError(f"n: must be nonnegative, got {n}")
    q2 = ctx.qpow(2)
    return _poch(q2, q2, n) / _poch(_ql(ctx, 2 * lam), q2, n)


def bergman_kernel_coeff(m: int, lam, ctx: QContext | None = None):
    """Series coefficient (q^(2 lambda); q^2)_m / (q^2; q^2)_m of the Bergman kernel."""
    ctx = ctx or QContext.exact()
    _check_lambda(lam)
    if m < 0:
        raise ValidationError(f"m: must be nonnegative, got {m}")
    q2 = ctx.qpow(2)
    return _poch(_ql(ctx, 2 * lam), q2, m) / _poch(q2, q2, m)


# ---------------------------------------------------------------------------
# Toeplitz operators
# ---------------------------------------------------------------------------


def _zeros(N: int, ctx: QContext):
    if ctx.is_exact:
        M = np.empty((N, N), dtype=object)
        M[:, :] = ctx.zero
        return M
    return np.zeros((N, N))


def _zstar_coeff(n: int, lam, ctx: QContext):
    return (1 - ctx.qpow(2 * n)) / (1 - _ql(ctx, 2 * (lam - 1)) * ctx.qpow(2 * n))


def _jackson_radial_eigenvalue(f: Callable, n: int, lam, ctx: QContext):
    """int_0^1 f(q^2n y)(q^2 y; q^2)_n y^(lam-2) d_{q^2} y over the same without f."""
    q2 = float(ctx.q) ** 2
    num = den = 0.0
    for i in range(ctx.max_terms):
        y = q2**i
        w = 1.0
        p = q2 * y
        for _ in range(n):
            w *= 1 - p
            p *= q2
        w *= y ** (lam - 2) * y
        num += f(q2**n * y) * w
        den += w
        if y ** (lam - 1) < ctx.eps * 1e-4:
            return num / den
    raise NonConvergenceError("toeplitz_matrix: Jackson quotient did not converge")


def toeplitz_matrix(symbol, lam, N: int, ctx: QContext | None = None) -> np.ndarray:
    """N x N Toeplitz matrix in the monomial basis.

    ``symbol`` is ``"z"``, ``"z_star"``, ``("y_power", k)`` or
    ``("radial", f)`` with f a function of y (float mode only).
    """
    ctx = ctx or QContext.exact()
    _check_lambda(lam)
    if N < 2:
        raise ValidationError(f"N: must be >= 2, got {N}")
    M = _zeros(N, ctx)
    if symbol == "z":
        for n in range(N - 1):
            M[n + 1, n] = ctx.one
        return M
    if symbol == "z_star":
        for n in range(1, N):
            M[n - 1, n] = _zstar_coeff(n, lam, ctx)
        return M
    if isinstance(symbol, tuple) and symbol[0] == "y_power":
        k = int(symbol[1])
        q2 = ctx.qpow(2)
        for n in range(N):
            M[n, n] = ctx.qpow(2 * k * n) * _poch(_ql(ctx, 2 * (lam - 1)), q2, k) / _poch(
                _ql(ctx, 2 * lam) * ctx.qpow(2 * n), q2, k
            )
        return M
    if isinstance(symbol, tuple) and symbol[0] == "radial":
        fctx = ctx.to_float_context()
        M = np.zeros((N, N))
        for n in range(N):
            M[n, n] = _jackson_radial_eigenvalue(symbol[1], n, float(lam), fctx)
        return M
    raise ValidationError(f"symbol: unknown symbol {symbol!r}")


def covariant_symbol_matrix(table: dict, lam, N: int, ctx: QContext | None = None) -> np.ndarray:
    """Matrix b_mn of sum a_ij zhat^i zhat*^j from the closed-form coefficients.

    b_mn = sum_{j <= min(m, n)} (q^2n; q^-2)_{n-j} / (q^(2(lam+n-1)); q^-2)_{n-j} a_{m-j, n-j}.
    """
    ctx = ctx or QContext.exact()
    _check_lambda(lam)
    M = _zeros(N, ctx)
    qm2 = ctx.qpow(-2)
    for m in range(N):
        for n in range(N):
            total = ctx.zero
            for j in range(min(m, n) + 1):
                a = table.get((m - j, n - j))
                if a is None or a == 0:
                    continue
                k = n - j
                total = total + _poch(ctx.qpow(2 * n), qm2, k) / _poch(_ql(ctx, 2 * (lam + n - 1)), qm2, k) * a
            M[m, n] = total
    return M


# ---------------------------------------------------------------------------
# covariant-symbol identities
# ---------------------------------------------------------------------------


def f0_symbol_sum(j: int, lam, ctx: QContext | None = None):
    """sum_{k<=j} (q^-2lam; q^2)_k/(q^2; q^2)_k (q^2j; q^-2)_k/(q^(2(lam+j-1)); q^-2)_k q^(2 lam k)."""
    ctx = ctx or QContext.exact()
    q2, qm2 = ctx.qpow(2), ctx.qpow(-2)
    a = _ql(ctx, -2 * lam)
    total = ctx.zero
    for k in range(j + 1):
        total = total + (
            _poch(a, q2, k)
            / _poch(q2, q2, k)
            * _poch(ctx.qpow(2 * j), qm2, k)
            / _poch(_ql(ctx, 2 * (lam + j - 1)), qm2, k)
            * _ql(ctx, 2 * lam * k)
        )
    return total


def y_lambda_expansion(lam, K: int, N: int, ctx: QContext | None = None):
    """Grid values j < N of sum_{k<=K} (q^-2lam; q^2)_k/(q^2; q^2)_k q^(2 lam k) z^k z*^k.

    Returns ``(values, tail_bounds)``.  At grid index j only k <= j
    contribute, so the value is final once K >= j; the bound is zero there
    and otherwise the absolute size of the omitted terms' sum estimate.
    """
    ctx = ctx or QContext.exact()
    q2, qm2 = ctx.qpow(2), ctx.qpow(-2)
    a = _ql(ctx, -2 * lam)
    vals, bounds = [], []
    for j in range(N):
        total = ctx.zero
        for k in range(min(K, j) + 1):
            total = total + _poch(a, q2, k) / _poch(q2, q2, k) * _ql(ctx, 2 * lam * k) * _poch(ctx.qpow(2 * j), qm2, k)
        vals.append(total)
        if K >= j:
            bounds.append(0.0)
        else:
            rest = 0.0
            for k in range(K + 1, j + 1):
                rest += abs(
                    float(_poch(a, q2, k) / _poch(q2, q2, k) * _ql(ctx, 2 * lam * k) * _poch(ctx.qpow(2 * j), qm2, k))
                )
            bounds.append(rest)
    return vals, bounds


def f0_expansion(K: int, ctx: QContext | None = None) -> PolElement:
    """sum_{j<=K} (-1)^j q^(j(j-1)) / (q^2; q^2)_j z^j z*^j."""
    ctx = ctx or QContext.exact()
    q2 = ctx.qpow(2)
    out = PolElement.zero(ctx)
    for j in range(K + 1):
        c = (-1) ** j * ctx.qpow(j * (j - 1)) / _poch(q2, q2, j)
        out = out + PolElement.monomial(ctx, j, j).scale(c)
    return out


# ---------------------------------------------------------------------------
# the polynomials p_j
# ---------------------------------------------------------------------------


def p_poly(j: int, ctx: QContext | None = None) -> tuple:
    """Coefficients (lowest degree first) of p_j in x."""
    ctx = ctx or QContext.exact()
    if j < 0:
        raise ValidationError(f"j: must be nonnegative, got {j}")
    one = ctx.one
    q2 = ctx.qpow(2)
    d2 = (one - q2) * (one - q2)
    total: tuple = ()
    prod: tuple = (one,)
    for k in range(j + 1):
        c = _poch(ctx.qpow(-2 * j), q2, k) / (_poch(q2, q2, k) ** 2) * ctx.qpow(2 * k)
        total = _padd(total, _pscale(prod, c))
        qi = ctx.qpow(2 * k)
        # factor 1 + q^2i((1-q^2)^2 x - 1 - q^2) + q^(4i+2) with i = k
        prod = _pmul(prod, (one - qi * (one + q2) + qi * qi * q2, qi * d2))
    return total


def p_values(J: int, x, ctx: QContext | None = None) -> list:
    """[p_0(x), ..., p_J(x)] by the three-term recurrence (x may be an array)."""
    ctx = ctx or QContext.floating()
    one = ctx.one
    q2 = ctx.qpow(2)
    u = one + q2 - (one - q2) * (one - q2) * x
    out = [one + 0 * x]
    if J >= 1:
        out.append(one - (one - q2) * x)
    for j in range(1, J):
        qj = ctx.qpow(2 * j + 2)
        out.append(((u - 2 * qj) * out[j] - q2 * (one - ctx.qpow(2 * j)) * out[j - 1]) / (one - qj))
    return out


def p_apply(j: int, values: Sequence, ctx: QContext | None = None, op: Callable | None = None):
    """p_j(L) applied to a finitely supported radial function via Horner on ``p_poly``.

    ``op`` defaults to the radial Laplacian; the grid is padded so the
    result is exact at every returned index.
    """
    ctx = ctx or QContext.exact()
    coeffs = p_poly(j, ctx)
    n = len(values) + j + 1
    vec = list(values) + [ctx.zero] * (n - len(values))
    op = op or (lambda v: laplacian_radial_apply(v, ctx))
    acc = [ctx.zero] * n
    for c in reversed(coeffs):
        acc = op(acc) if any(a != 0 for a in acc) else acc
        acc = [a + c * v for a, v in zip(acc, vec)]
    return acc


# ---------------------------------------------------------------------------
# Berezin transform
# ---------------------------------------------------------------------------


def _p_norm_bounds(J: int, ctx: QContext) -> np.ndarray:
    """max |p_j| over the spectrum [(1+q)^-2, (1-q)^-2], sampled on a fine grid."""
    fctx = ctx.to_float_context()
    q = fctx.q
    mu = np.linspace((1 + q) ** -2, (1 - q) ** -2, 4001)
    vals = p_values(J, mu, fctx)
    return np.array([np.max(np.abs(v)) for v in vals])


def berezin_radial(values: Sequence, lam, J: int | None = None, ctx: QContext | None = None, N: int | None = None):
    """B_lambda f = (1 - t) sum_j t^j p_j(L) f on the radial grid, t = q^(2(lam-1)).

    Returns ``(grid_values, J_used, tail_bound)``.  Without ``J`` the sum
    stops once the estimated tail ``t^(J+1) max|p_(J+1)| / (1 - t)`` falls
    below the context tolerance.
    """
    ctx = ctx or QContext.floating()
    _check_lambda(lam)
    fctx = ctx.to_float_context()
    t = float(fctx.q) ** (2 * (float(lam) - 1))
    if J is None:
        Jmax = 2000
        bounds = _p_norm_bounds(Jmax, fctx)
        for J in range(Jmax):
            tail = t ** (J + 1) * np.max(bounds[J + 1 :]) / (1 - t)
            if tail < fctx.eps:
                break
        else:
            raise NonConvergenceError("berezin_radial: tail bound not reached")
    else:
        tail = t ** (J + 1) * float(np.max(_p_norm_bounds(J + 50, fctx)[J + 1 :])) / (1 - t)
    N = N or len(values)
    size = max(N, len(values)) + J + 2
    vec = [float(v) for v in values] + [0.0] * (size - len(values))
    q2 = fctx.q**2
    L = lambda v: laplacian_radial_apply(v, fctx)  # noqa: E731
    prev = [0.0] * size
    cur = vec
    total = np.array(cur) * 1.0
    u_of = lambda v: np.array(v) * (1 + q2) - (1 - q2) ** 2 * np.array(L(v))  # noqa: E731
    for j in range(J):
        qj = q2 ** (j + 1)
        nxt = ((u_of(cur) - 2 * qj * np.array(cur)) - q2 * (1 - q2**j) * np.array(prev)) / (1 - qj)
        prev, cur = cur, list(nxt)
        total = total + t ** (j + 1) * nxt
    return list((1 - t) * total[:N]), J, float(tail)


def _qnum(x: float, q: float) -> float:
    return (q**x - q ** (-x)) / (q - 1 / q)


def berezin_product_formula(values: Sequence, lam, M: int = 40, size: int = 200, ctx: QContext | None = None):
    """prod_{j<M} (1 + q/([lam+j][lam+j-1]) L)^-1 f via banded solves in the e_j basis."""
    from scipy.linalg import solve_banded

    fctx = (ctx or QContext.floating()).to_float_context()
    _check_lambda(lam)
    q = fctx.q
    a, b = jacobi_coefficients(size, fctx)
    a, b = np.array(a, dtype=float), np.array(b, dtype=float)
    # f = sum psi_j f_j = sum psi_j q^-j e_j (up to a constant)
    w = np.zeros(size)
    w[: len(values)] = [float(v) * q ** (-j) for j, v in enumerate(values)]
    for j in range(M):
        c = q / (_qnum(lam + j, q) * _qnum(lam + j - 1, q))
        ab = np.zeros((3, size))
        ab[0, 1:] = c * b
        ab[1, :] = 1 + c * a
        ab[2, :-1] = c * b
        w = solve_banded((1, 1), ab, w)
    return list(w * q ** np.arange(size))


# ---------------------------------------------------------------------------
# star product
# ---------------------------------------------------------------------------


class StarSeries(list):
    """Coefficients [c_0, ..., c_K] of a truncated power series in t."""

    def order(self) -> int:
        return len(self) - 1

    def to_json(self) -> list:
        return [{"power": k, "coefficient": c.to_json()} for k, c in enumerate(self)]


def _laplacian_poly(h: PolElement, j: int, cache: dict) -> list:
    """[p_0(box)h, ..., p_j(box)h] via the recurrence."""
    key = (h, j)
    if key in cache:
        return cache[key]
    ctx = h.ctx
    one = ctx.one
    q2 = ctx.qpow(2)
    d2 = (one - q2) * (one - q2)
    out = [h]
    if j >= 1:
        out.append(h - laplacian_apply(h).scale(one - q2))
    for i in range(1, j):
        qi = ctx.qpow(2 * i + 2)
        cur = out[i]
        u_cur = cur.scale(one + q2) - laplacian_apply(cur).scale(d2)
        nxt = (u_cur - cur.scale(2 * qi) - out[i - 1].scale(q2 * (one - ctx.qpow(2 * i)))).scale(one / (one - qi))
        out.append(nxt)
    cache[key] = out
    return out


def star_product(f: PolElement, g: PolElement, K: int, cache: dict | None = None) -> StarSeries:
    """Coefficients of t^0..t^K in f *_t g for polynomial elements f, g."""
    if K < 0:
        raise ValidationError(f"K: must be nonnegative, got {K}")
    f._same(g)
    ctx = f.ctx
    cache = {} if cache is None else cache
    zero = PolElement.zero(ctx)
    out = [zero] * (K + 1)
    for (a, b), alpha in f.decompose().items():
        for (c, d), beta in g.decompose().items():
            mid = PolElement.monomial(ctx, 0, b) * PolElement.monomial(ctx, c, 0)
            P = _laplacian_poly(mid, K, cache)
            left = PolElement.monomial(ctx, a, 0)
            right = PolElement.monomial(ctx, 0, d)
            coef = alpha * beta
            prev = zero
            for k in range(K + 1):
                cur = left * P[k] * right
                out[k] = out[k] + (cur - prev).scale(coef)
                prev = cur
    return StarSeries(out)


def star_series_product(F: Sequence, G: Sequence, K: int, cache: dict | None = None) -> StarSeries:
    """Star product of two truncated t-series, truncated at order K."""
    cache = {} if cache is None else cache
    ctx = F[0].ctx
    out = [PolElement.zero(ctx)] * (K + 1)
    for i, fi in enumerate(F):
        for j, gj in enumerate(G):
            if i + j > K or fi.is_zero() or gj.is_zero():
                continue
            prod = star_product(fi, gj, K - i - j, cache)
            for k, c in enumerate(prod):
                out[i + j + k] = out[i + j + k] + c
    return StarSeries(out)
