"""q-orthogonal polynomial families: explicit hypergeometric forms,
three-term recurrences, weights, norms and orthogonality sums.

Supported families and their parameters:

=================  ==================  =====================================
family             params              natural variable
=================  ==================  =====================================
askey_wilson       (a, b, c, d)        x = cos(theta)
al_salam_chihara   (a, b)              x = cos(theta)
cont_dual_q_hahn   (a, b, c)           x = cos(theta)
little_q_jacobi    (a, b)              x (orthogonal on the grid q^k)
q_hahn             (alpha, beta, N)    X = q^-x (orthogonal for x = 0..N)
=================  ==================  =====================================

For the trigonometric families the explicit form needs ``(a e^{i theta},
a e^{-i theta}; q)_k``, which is rewritten as the product of
``1 - 2 a x q^j + a^2 q^2j``.  Every evaluation is therefore a rational
function of x and the parameters, and exact inputs give exact outputs.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .context import QContext
from .errors import DomainError, ExactModeUnsupported, NonConvergenceError, ValidationError
from .qseries import _ctx, _num, q_pochhammer

__all__ = [
    "FAMILIES",
    "FamilySpec",
    "askey_wilson_operator",
    "h_product",
    "orth_eval",
    "orth_gram",
    "orth_norm",
    "orth_weight",
    "recurrence_coefficients",
]

FAMILIES = ("askey_wilson", "al_salam_chihara", "cont_dual_q_hahn", "little_q_jacobi", "q_hahn")
_ARITY = {"askey_wilson": 4, "al_salam_chihara": 2, "cont_dual_q_hahn": 3, "little_q_jacobi": 2, "q_hahn": 3}


@dataclass(frozen=True)
class FamilySpec:
    family: str
    params: tuple
    base: object = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValidationError(f"family: unknown family {self.family!r}")
        object.__setattr__(self, "params", tuple(self.params))
        if len(self.params) != _ARITY[self.family]:
            raise ValidationError(
                f"params: {self.family} takes {_ARITY[self.family]} parameters, got {len(self.params)}"
            )

    def q(self, ctx: QContext):
        return ctx.q if self.base is None else self.base

    def validate(self, ctx: QContext) -> None:
        """Check the parameter hypotheses under which the family is orthogonal."""
        q = self.q(ctx)
        p = self.params
        if self.family in ("al_salam_chihara", "cont_dual_q_hahn"):
            for name, v in zip("abc", p):
                if isinstance(v, complex):
                    if abs(v) >= 1:
                        raise DomainError(f"{name}: modulus must be < 1")
                elif abs(_num(v)) >= 1:
                    raise DomainError(f"{name}: modulus must be < 1, got {v}")
            complex_params = [v for v in p if isinstance(v, complex) and v.imag != 0]
            if complex_params:
                conj_ok = all(any(abs(w - v.conjugate()) < 1e-14 for w in p) for v in complex_params)
                if not conj_ok:
                    raise DomainError("params: complex parameters must come in conjugate pairs")
        elif self.family == "little_q_jacobi":
            a, b = p
            qi = 1 / _num(q)
            if not (0 < _num(a) < qi):
                raise DomainError(f"a: need 0 < a < 1/q, got {a}")
            if not (_num(b) < qi):
                raise DomainError(f"b: need b < 1/q, got {b}")
        elif self.family == "q_hahn":
            alpha, beta, N = p
            if not isinstance(N, int) or N < 1:
                raise DomainError(f"N: must be a positive integer, got {N}")
            qn, al, be = _num(q), _num(alpha), _num(beta)
            small = 0 < al < 1 / qn and 0 < be < 1 / qn
            large = al > qn ** (-N) and be > qn ** (-N)
            if not (small or large):
                raise DomainError("alpha, beta: need both in (0, 1/q) or both above q^-N")


# ---------------------------------------------------------------------------
# explicit forms
# ---------------------------------------------------------------------------


def _poch(a, q, k):
    r = a * 0 + 1
    f = a
    for _ in range(k):
        r = r * (1 - f)
        f = f * q
    return r


def _trig_sum(n: int, q, extra_upper: Sequence, a, x, lower: Sequence):
    """sum_k (q^-n, *extra_upper; q)_k (a e^{it}, a e^{-it}; q)_k / ((*lower, q; q)_k) q^k.

    Lower parameters equal to 0 contribute factors of 1.
    """
    total = 0
    term = 1
    qn_inv = q ** (-n)
    qk = 1
    for k in range(n + 1):
        total = total + term
        if k == n:
            break
        num = (1 - qn_inv * qk) * (1 - 2 * a * x * qk + a * a * qk * qk)
        for u in extra_upper:
            num = num * (1 - u * qk)
        den = 1 - q * qk
        for c in lower:
            den = den * (1 - c * qk)
        term = term * num / den * q
        qk = qk * q
    return total


_SYMMETRIC = ("askey_wilson", "al_salam_chihara", "cont_dual_q_hahn")


def _lead_nonzero(p: tuple):
    """Reorder so that the first parameter is nonzero (None if all vanish).

    The explicit forms carry a removable a^-n; the polynomials themselves
    are symmetric in their parameters.
    """
    for i, v in enumerate(p):
        if v != 0:
            return (v,) + p[:i] + p[i + 1 :]
    return None


def _chebyshev_t(m: int, x):
    prev, cur = x * 0 + 1, x
    if m == 0:
        return prev
    for _ in range(m - 1):
        prev, cur = cur, 2 * x * cur - prev
    return cur


def _q_hermite(n: int, x, q):
    """Continuous q-Hermite: sum_k [n, k]_q T_|n-2k|(x)."""
    total, binom = 0, x * 0 + 1
    for k in range(n + 1):
        total = total + binom * _chebyshev_t(abs(n - 2 * k), x)
        binom = binom * (1 - q ** (n - k)) / (1 - q ** (k + 1))
    return total


def _explicit(spec: FamilySpec, n: int, x, q):
    p = spec.params
    fam = spec.family
    if fam in _SYMMETRIC:
        p = _lead_nonzero(p)
        if p is None:
            return _q_hermite(n, x, q)
    if fam == "askey_wilson":
        a, b, c, d = p
        s = _trig_sum(n, q, [a * b * c * d * q ** (n - 1)], a, x, [a * b, a * c, a * d])
        return _poch(a * b, q, n) * _poch(a * c, q, n) * _poch(a * d, q, n) / a**n * s
    if fam == "al_salam_chihara":
        a, b = p
        return _poch(a * b, q, n) / a**n * _trig_sum(n, q, [], a, x, [a * b])
    if fam == "cont_dual_q_hahn":
        a, b, c = p
        return _poch(a * b, q, n) * _poch(a * c, q, n) / a**n * _trig_sum(n, q, [], a, x, [a * b, a * c])
    if fam == "little_q_jacobi":
        a, b = p
        total, term, qk = 0, 1, 1
        qn_inv = q ** (-n)
        c1 = a * b * q ** (n + 1)
        for k in range(n + 1):
            total = total + term
            if k == n:
                break
            term = term * (1 - qn_inv * qk) * (1 - c1 * qk) / ((1 - a * q * qk) * (1 - q * qk)) * q * x
            qk = qk * q
        return total
    if fam == "q_hahn":
        alpha, beta, N = p
        if n > N:
            raise DomainError(f"n: q-Hahn degree must be <= N={N}, got {n}")
        total, term, qk = 0, 1, 1
        qn_inv = q ** (-n)
        qN_inv = q ** (-N)
        c1 = alpha * beta * q ** (n + 1)
        for k in range(n + 1):
            total = total + term
            if k == n:
                break
            term = term * (1 - qn_inv * qk) * (1 - c1 * qk) * (1 - x * qk)
            term = term / ((1 - alpha * q * qk) * (1 - qN_inv * qk) * (1 - q * qk)) * q
            qk = qk * q
        return total
    raise ValidationError(f"family: {fam}")


# ---------------------------------------------------------------------------
# recurrences
# ---------------------------------------------------------------------------


def recurrence_coefficients(spec: FamilySpec, n: int, ctx: QContext | None = None):
    """The pair (A_n, C_n) of the family's three-term recurrence.

    For Al-Salam-Chihara, whose recurrence is monic, the pair returned is
    ``((a + b) q^n, (1 - q^n)(1 - ab q^{n-1}))``.
    """
    ctx = _ctx(ctx)
    q = spec.q(ctx)
    p = spec.params
    fam = spec.family
    qn = q**n
    if fam == "askey_wilson":
        a, b, c, d = p
        abcd = a * b * c * d
        A = (1 - a * b * qn) * (1 - a * c * qn) * (1 - a * d * qn) * (1 - abcd * qn / q)
        A = A / (a * (1 - abcd * qn * qn / q) * (1 - abcd * qn * qn))
        if n == 0:
            C = 0 * a
        else:
            C = a * (1 - qn) * (1 - b * c * qn / q) * (1 - b * d * qn / q) * (1 - c * d * qn / q)
            C = C / ((1 - abcd * qn * qn / (q * q)) * (1 - abcd * qn * qn / q))
        return A, C
    if fam == "al_salam_chihara":
        a, b = p
        return (a + b) * qn, (1 - qn) * (1 - a * b * qn / q)
    if fam == "cont_dual_q_hahn":
        a, b, c = p
        return (1 - a * b * qn) * (1 - a * c * qn) / a, a * (1 - qn) * (1 - b * c * qn / q)
    if fam == "little_q_jacobi":
        a, b = p
        A = qn * (1 - a * q * qn) * (1 - a * b * q * qn) / ((1 - a * b * q * qn * qn) * (1 - a * b * q * q * qn * qn))
        if n == 0:
            C = 0 * a
        else:
            C = a * qn * (1 - qn) * (1 - b * qn) / ((1 - a * b * qn * qn) * (1 - a * b * q * qn * qn))
        return A, C
    if fam == "q_hahn":
        alpha, beta, N = p
        qN = q**N
        ab = alpha * beta
        A = (1 - qn / qN) * (1 - alpha * q * qn) * (1 - ab * q * qn) / ((1 - ab * q * qn * qn) * (1 - ab * q * q * qn * qn))
        if n == 0:
            C = 0 * alpha
        else:
            C = -alpha * qn / qN * (1 - qn) * (1 - ab * q * qN * qn) * (1 - beta * qn)
            C = C / ((1 - ab * qn * qn) * (1 - ab * q * qn * qn))
        return A, C
    raise ValidationError(f"family: {fam}")


def _by_recurrence(spec: FamilySpec, n: int, x, q, ctx: QContext):
    fam = spec.family
    p = spec.params
    prev, cur = 0, 1
    if fam == "al_salam_chihara":
        for k in range(n):
            B, C = recurrence_coefficients(spec, k, ctx)
            prev, cur = cur, (2 * x - B) * cur - C * prev
        return cur
    if fam in ("askey_wilson", "cont_dual_q_hahn"):
        lead = _lead_nonzero(p)
        if lead is None:
            # all parameters zero: continuous q-Hermite, 2x H_k = H_{k+1} + (1 - q^k) H_{k-1}
            for k in range(n):
                prev, cur = cur, 2 * x * cur - (1 - q**k) * prev
            return cur
        if lead != p:
            return _by_recurrence(FamilySpec(fam, lead, spec.base), n, x, q, ctx)
        a = p[0]
        for k in range(n):
            A, C = recurrence_coefficients(spec, k, ctx)
            prev, cur = cur, ((2 * x - a - 1 / a + A + C) * cur - C * prev) / A
        norm = 1 / a**n
        for v in p[1:]:
            norm = norm * _poch(a * v, q, n)
        return norm * cur
    if fam == "little_q_jacobi":
        for k in range(n):
            A, C = recurrence_coefficients(spec, k, ctx)
            prev, cur = cur, ((-x + A + C) * cur - C * prev) / A
        return cur
    if fam == "q_hahn":
        N = p[2]
        if n > N:
            raise DomainError(f"n: q-Hahn degree must be <= N={N}, got {n}")
        for k in range(n):
            A, C = recurrence_coefficients(spec, k, ctx)
            prev, cur = cur, ((-(1 - x) + A + C) * cur - C * prev) / A
        return cur
    raise ValidationError(f"family: {fam}")


def orth_eval(spec: FamilySpec, n: int, point, mode: str = "explicit", ctx: QContext | None = None):
    """Evaluate the degree-n member of a family at ``point``.

    ``point`` is x = cos(theta) for the trigonometric families, x for little
    q-Jacobi and X = q^-x for q-Hahn.  ``mode`` selects the explicit
    hypergeometric form or the three-term recurrence.
    """
    ctx = _ctx(ctx)
    if n < 0:
        raise ValidationError(f"n: degree must be nonnegative, got {n}")
    q = spec.q(ctx)
    x = point
    if ctx.mode == "float":
        q = _num(q)
        x = x if isinstance(x, complex) else _num(x)
    if mode == "explicit":
        return _explicit(spec, n, x, q)
    if mode == "recurrence":
        return _by_recurrence(spec, n, x, q, ctx)
    raise ValidationError(f"mode: unknown evaluation mode {mode!r}")


# ---------------------------------------------------------------------------
# weights and norms
# ---------------------------------------------------------------------------


def h_product(x, alpha, q, ctx: QContext | None = None):
    """``h(x, alpha) = prod_k (1 - 2 alpha x q^k + alpha^2 q^2k)``, truncated."""
    ctx = _ctx(ctx)
    x, alpha, q = (v if isinstance(v, complex) else _num(v) for v in (x, alpha, q))
    value = 1.0
    qk = 1.0
    target = ctx.eps * 1e-4
    for _ in range(ctx.max_terms):
        value *= 1 - 2 * alpha * x * qk + alpha * alpha * qk * qk
        qk *= q
        if (2 * abs(alpha * x) * qk + abs(alpha) ** 2 * qk * qk) / (1 - abs(q)) < target:
            return value
    raise NonConvergenceError("h_product: no convergence")


def _trig_weight(x, params, q, ctx):
    s = math.sqrt(_num(q))
    num = h_product(x, 1, q, ctx) * h_product(x, -1, q, ctx) * h_product(x, s, q, ctx) * h_product(x, -s, q, ctx)
    den = 1.0
    for a in params:
        den *= h_product(x, a, q, ctx)
    return num / den


def orth_weight(spec: FamilySpec, point, ctx: QContext | None = None):
    """Orthogonality weight at a support point.

    Continuous families take x in [-1, 1] and return w(x) (the measure is
    ``w(x) dx / (2 pi sqrt(1 - x^2))``).  Discrete families take the integer
    grid index: k for little q-Jacobi (point q^k) and x for q-Hahn
    (point q^-x).
    """
    ctx = _ctx(ctx)
    q = spec.q(ctx)
    fam = spec.family
    p = spec.params
    if fam in ("al_salam_chihara", "cont_dual_q_hahn", "askey_wilson"):
        if ctx.is_exact and point not in (1, -1):
            raise ExactModeUnsupported("orth_weight: continuous weights need float mode")
        xv = _num(point)
        if not (-1 <= xv <= 1):
            raise DomainError(f"point: must lie in [-1, 1], got {point}")
        if xv in (1.0, -1.0):
            return ctx.zero if ctx.is_exact else 0.0
        return _trig_weight(xv, p, q, ctx)
    if fam == "little_q_jacobi":
        a, b = p
        k = _grid_index(point)
        return _poch(b * q, q, k) / _poch(q, q, k) * (a * q) ** k
    if fam == "q_hahn":
        alpha, beta, N = p
        x = _grid_index(point)
        if x > N:
            raise DomainError(f"point: q-Hahn support is 0..{N}, got {x}")
        qN_inv = q ** (-N)
        w = _poch(alpha * q, q, x) * _poch(qN_inv, q, x) / (_poch(q, q, x) * _poch(qN_inv / beta, q, x))
        return w / (alpha * beta * q) ** x
    raise ValidationError(f"family: {fam}")


def _grid_index(point) -> int:
    if isinstance(point, bool) or not isinstance(point, (int, Fraction)) or int(point) != point or point < 0:
        raise DomainError(f"point: discrete families take a nonnegative integer grid index, got {point!r}")
    return int(point)


def orth_norm(spec: FamilySpec, n: int, ctx: QContext | None = None):
    """The squared norm h_n on the right-hand side of the orthogonality relation."""
    ctx = _ctx(ctx)
    q = spec.q(ctx)
    p = spec.params
    fam = spec.family
    inf = math.inf
    if fam == "askey_wilson":
        raise NotImplementedError("Askey-Wilson norms are not provided; the measure can carry point masses")
    if fam == "al_salam_chihara":
        a, b = p
        return 1 / (q_pochhammer(q ** (n + 1), q, inf, ctx) * q_pochhammer(a * b * q**n, q, inf, ctx))
    if fam == "cont_dual_q_hahn":
        a, b, c = p
        den = 1
        for v in (q ** (n + 1), a * b * q**n, a * c * q**n, b * c * q**n):
            den = den * q_pochhammer(v, q, inf, ctx)
        return 1 / den
    if fam == "little_q_jacobi":
        a, b = p
        head = q_pochhammer(a * b * q * q, q, inf, ctx) * (1 - a * b * q) * (a * q) ** n
        head = head / (q_pochhammer(a * q, q, inf, ctx) * (1 - a * b * q ** (2 * n + 1)))
        return head * _poch(q, q, n) * _poch(b * q, q, n) / (_poch(a * q, q, n) * _poch(a * b * q, q, n))
    if fam == "q_hahn":
        alpha, beta, N = p
        if n > N:
            raise DomainError(f"n: q-Hahn degree must be <= N={N}, got {n}")
        ab = alpha * beta
        first = _poch(ab * q * q, q, N) / (_poch(beta * q, q, N) * (alpha * q) ** N)
        second = _poch(q, q, n) * _poch(ab * q ** (N + 2), q, n) * _poch(beta * q, q, n)
        second = second / (_poch(alpha * q, q, n) * _poch(ab * q, q, n) * _poch(q ** (-N), q, n))
        third = (1 - ab * q) * (-alpha * q) ** n / (1 - ab * q ** (2 * n + 1))
        # q^(n(n-1)/2 - N n) with an integer exponent
        return first * second * third * q ** (n * (n - 1) // 2 - N * n)
    raise ValidationError(f"family: {fam}")


# ---------------------------------------------------------------------------
# orthogonality sums
# ---------------------------------------------------------------------------


def orth_gram(spec: FamilySpec, m: int, n: int, ctx: QContext | None = None):
    """The inner product of the degree-m and degree-n members.

    Continuous families are integrated over theta in [0, pi] with adaptive
    quadrature; little q-Jacobi sums the weighted grid series until the
    remainder is negligible; q-Hahn sums its finite support (exact in exact
    mode).
    """
    ctx = _ctx(ctx)
    fam = spec.family
    if fam == "q_hahn":
        N = spec.params[2]
        q = spec.q(ctx)
        total = 0
        for x in range(N + 1):
            X = q ** (-x)
            total = total + orth_weight(spec, x, ctx) * orth_eval(spec, m, X, ctx=ctx) * orth_eval(spec, n, X, ctx=ctx)
        return total
    fctx = ctx.to_float_context()
    if fam == "little_q_jacobi":
        q = _num(spec.q(fctx))
        total = 0.0
        small = 0
        for k in range(fctx.max_terms):
            term = orth_weight(spec, k, fctx) * orth_eval(spec, m, q**k, ctx=fctx) * orth_eval(spec, n, q**k, ctx=fctx)
            total += term
            if abs(term) < fctx.eps * 1e-4 * max(1.0, abs(total)):
                small += 1
                if small >= 5:
                    return total
            else:
                small = 0
        raise NonConvergenceError("orth_gram: weighted grid sum did not converge")
    if fam in ("al_salam_chihara", "cont_dual_q_hahn"):
        from scipy.integrate import quad

        def integrand(theta):
            x = math.cos(theta)
            return (
                _trig_weight(x, spec.params, spec.q(fctx), fctx)
                * orth_eval(spec, m, x, ctx=fctx)
                * orth_eval(spec, n, x, ctx=fctx)
            )

        with warnings.catch_warnings():
            # roundoff warnings near 1e-13 are expected; the error estimate is checked below
            warnings.simplefilter("ignore")
            value, err = quad(integrand, 0.0, math.pi, epsabs=1e-12, epsrel=1e-11, limit=400)
        if err > 1e-9:
            raise NonConvergenceError(f"orth_gram: quadrature error estimate {err:g} too large")
        return value / (2 * math.pi)
    raise NotImplementedError("orthogonality sums are not provided for Askey-Wilson polynomials")


# ---------------------------------------------------------------------------
# divided-difference operator in the trigonometric variable
# ---------------------------------------------------------------------------


def askey_wilson_operator(f: Callable, t, q) -> complex:
    """Divided difference ``(f(q^{1/2} t) - f(q^{-1/2} t)) / (x(q^{1/2} t) - x(q^{-1/2} t))``.

    ``f`` is a function of the Laurent variable t and ``x(t) = (t + 1/t)/2``.
    """
    s = math.sqrt(_num(q))
    up, down = s * t, t / s
    dx = ((up + 1 / up) - (down + 1 / down)) / 2
    return (f(up) - f(down)) / dx
