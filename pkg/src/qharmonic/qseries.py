"""q-Pochhammer symbols, q-Gamma/Beta, Jackson integrals, basic
hypergeometric series, q-exponentials and q-difference quotients.

Finite products and terminating series are evaluated with whatever scalar
type is passed in, so rational input gives exact output.  Infinite objects
are truncated once a geometric bound on the remainder drops below the
context tolerance; exact contexts refuse them.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .context import QContext, Surd
from .errors import DomainError, ExactModeUnsupported, NonConvergenceError, PoleError, ValidationError

__all__ = [
    "HyperSpec",
    "basic_hyper",
    "gauss_binomial",
    "gauss_binomial_value",
    "jackson_integral",
    "q_beta",
    "q_diff",
    "q_exp",
    "q_gamma",
    "q_number",
    "q_pochhammer",
    "q_pochhammer_prod",
]

INF = math.inf
_FLOAT = QContext.floating()
# Infinite products and series stop once the remainder bound is this far
# below the requested tolerance, which keeps accumulated error well inside it.
_TAIL_SAFETY = 1e-4


def _ctx(ctx: QContext | None) -> QContext:
    return ctx if ctx is not None else _FLOAT


def _is_exact_scalar(x) -> bool:
    if isinstance(x, (int, Fraction, Surd)):
        return True
    return hasattr(x, "numer") and hasattr(x, "denom")


def _num(x):
    """Numeric (float or complex) value of a scalar."""
    if isinstance(x, (float, complex)):
        return x
    if isinstance(x, (int, Fraction, Surd)):
        return float(x)
    raise ExactModeUnsupported("symbolic scalar has no numeric value")


def _real_if_possible(z, *inputs):
    if isinstance(z, complex) and not any(isinstance(v, complex) for v in inputs):
        return z.real
    return z


# ---------------------------------------------------------------------------
# Pochhammer symbols
# ---------------------------------------------------------------------------


def _finite_product(a, base, n: int):
    result = a * 0 + 1
    factor = a
    for _ in range(n):
        result = result * (1 - factor)
        factor = factor * base
    return result


def _infinite_product(a, base, ctx: QContext):
    """Return ``((a; base)_inf, bound)`` with an absolute error bound."""
    a, base = _num(a), _num(base)
    rb = abs(base)
    if rb >= 1:
        raise DomainError(f"base: infinite product needs |base| < 1, got {base}")
    if a == 0:
        return 1.0, 0.0
    value = complex(1.0)
    term = complex(a)
    target = ctx.eps * _TAIL_SAFETY
    for _ in range(ctx.max_terms):
        value *= 1 - term
        term *= base
        tail = abs(term) / (1 - rb)
        if tail < target and abs(term) < 0.5:
            # |prod_{j>=k}(1 - x_j) - 1| <= exp(2 * sum|x_j|) - 1 once |x_j| <= 1/2
            bound = abs(value) * math.expm1(2 * tail)
            return _real_if_possible(value, a, base), bound
    raise NonConvergenceError(
        f"q_pochhammer: infinite product with a={a}, base={base} did not converge in {ctx.max_terms} factors"
    )


def q_pochhammer(a, base, n, ctx: QContext | None = None, return_bound: bool = False):
    """The q-shifted factorial ``(a; base)_n``.

    ``n`` may be a nonnegative integer (exact product), ``math.inf`` (the
    convergent infinite product, truncated by the tail policy) or any other
    real or complex number, in which case the value is the quotient
    ``(a; base)_inf / (a*base**n; base)_inf`` on the principal branch.
    """
    ctx = _ctx(ctx)
    if isinstance(n, int) or (isinstance(n, Fraction) and n.denominator == 1):
        n = int(n)
        if n < 0:
            # (a;q)_{-m} = 1/(a q^{-m}; q)_m
            value = 1 / _finite_product(a * base**n, base, -n)
            return (value, 0.0) if return_bound else value
        value = _finite_product(a, base, n)
        if ctx.mode == "float" and _is_exact_scalar(value):
            value = _num(value)
        return (value, 0.0) if return_bound else value
    if ctx.is_exact:
        raise ExactModeUnsupported("q_pochhammer: infinite or non-integer index needs float mode")
    if n == INF:
        value, bound = _infinite_product(a, base, ctx)
        return (value, bound) if return_bound else value
    b = _num(base)
    if abs(b) >= 1:
        raise DomainError(f"base: non-integer index needs |base| < 1, got {base}")
    shift = cmath.exp(complex(n) * cmath.log(b)) if (isinstance(n, complex) or b < 0) else b ** float(n)
    num, e1 = _infinite_product(a, b, ctx)
    den, e2 = _infinite_product(_num(a) * shift, b, ctx)
    if den == 0:
        raise PoleError(f"q_pochhammer: ({a}*base^{n}; base)_inf vanishes")
    value = num / den
    bound = (e1 + abs(value) * e2) / abs(den)
    value = _real_if_possible(value, a, base, n)
    return (value, bound) if return_bound else value


def q_pochhammer_prod(params: Sequence, base, n, ctx: QContext | None = None):
    """``(a_1, ..., a_m; base)_n`` as the product of the single symbols."""
    result = 1
    for a in params:
        result = result * q_pochhammer(a, base, n, ctx)
    return result


# ---------------------------------------------------------------------------
# q-numbers and Gaussian binomials
# ---------------------------------------------------------------------------


def q_number(lam, ctx: QContext | None = None):
    """The symmetric q-number ``(q**lam - q**-lam) / (q - 1/q)``."""
    ctx = _ctx(ctx)
    ql = ctx.power(lam)
    return (ql - 1 / ql) / (ctx.q - 1 / ctx.q)


def gauss_binomial(n: int, k: int):
    """The Gaussian binomial coefficient as a sympy polynomial in ``q``."""
    from sympy import Poly, Symbol

    if not (0 <= k <= n):
        raise ValidationError(f"k: need 0 <= k <= n, got n={n}, k={k}")
    q = Symbol("q")
    # Pascal-type recurrence [n,k] = [n-1,k-1] + q^k [n-1,k] on coefficient lists
    rows = [[1]]
    for m in range(1, n + 1):
        prev = rows
        cur = []
        for j in range(0, min(m, k) + 1):
            left = prev[j - 1] if j >= 1 else [0]
            right = prev[j] if j <= m - 1 and j < len(prev) else [0]
            shifted = [0] * j + list(right)
            size = max(len(left), len(shifted))
            cur.append([(left[i] if i < len(left) else 0) + (shifted[i] if i < len(shifted) else 0) for i in range(size)])
        rows = cur
    coeffs = rows[k]
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    return Poly(list(reversed(coeffs)), q)


def gauss_binomial_value(n: int, k: int, q):
    """``(q;q)_n / ((q;q)_k (q;q)_{n-k})`` evaluated at a scalar q."""
    if not (0 <= k <= n):
        raise ValidationError(f"k: need 0 <= k <= n, got n={n}, k={k}")
    return _finite_product(q, q, n) / (_finite_product(q, q, k) * _finite_product(q, q, n - k))


# ---------------------------------------------------------------------------
# q-Gamma and q-Beta
# ---------------------------------------------------------------------------


def _is_nonpositive_integer(x) -> bool:
    if isinstance(x, complex):
        if x.imag != 0:
            return False
        x = x.real
    try:
        xf = float(x)
    except TypeError:
        return False
    return xf <= 0 and float(xf).is_integer()


def q_gamma(x, ctx: QContext | None = None, base=None):
    """``Gamma_base(x) = (base;base)_inf / (base^x;base)_inf * (1-base)^(1-x)``.

    ``base`` defaults to the context's q.  For a positive integer argument
    the value is the finite product ``[1][2]...[x-1]`` of q-integers, which is
    what exact mode returns.
    """
    ctx = _ctx(ctx)
    b = ctx.q if base is None else base
    if _is_nonpositive_integer(x):
        raise PoleError(f"x: q-Gamma has a pole at {x}")
    is_int = isinstance(x, int) or (isinstance(x, Fraction) and x.denominator == 1) or (
        isinstance(x, float) and x.is_integer()
    )
    if is_int and (ctx.is_exact or _is_exact_scalar(b)):
        m = int(x)
        value = 1
        for j in range(1, m):
            value = value * (1 - b**j) / (1 - b)
        if ctx.mode == "float":
            return _num(value)
        return value
    if ctx.is_exact:
        raise ExactModeUnsupported("q_gamma: non-integer argument needs float mode")
    bn = _num(b)
    if isinstance(x, complex):
        bx = cmath.exp(x * math.log(bn))
        pref = cmath.exp((1 - x) * math.log(1 - bn))
    else:
        bx = bn ** float(x)
        pref = (1 - bn) ** (1 - float(x))
    num = q_pochhammer(bn, bn, INF, ctx)
    den = q_pochhammer(bx, bn, INF, ctx)
    if abs(den) < 1e-300:
        raise PoleError(f"x: q-Gamma has a pole at {x}")
    return num / den * pref


def q_beta(x, y, ctx: QContext | None = None, base=None):
    """``B_q(x, y) = Gamma_q(x) Gamma_q(y) / Gamma_q(x + y)``."""
    return q_gamma(x, ctx, base) * q_gamma(y, ctx, base) / q_gamma(x + y, ctx, base)


# ---------------------------------------------------------------------------
# Jackson integrals
# ---------------------------------------------------------------------------


def _poly_moment(coeffs: Sequence, a, base):
    """Exact Jackson integral over [0, a] of the polynomial with these coefficients."""
    total = 0
    for n, c in enumerate(coeffs):
        if c == 0:
            continue
        total = total + c * a ** (n + 1) * (1 - base) / (1 - base ** (n + 1))
    return total


def jackson_integral(
    f: Callable | Sequence,
    a=1,
    base=None,
    orientation: str = "zero_to_a",
    ctx: QContext | None = None,
    terms: int | None = None,
):
    """Jackson q-integral in one of two orientations.

    ``zero_to_a``
        ``a (1 - base) sum_k f(a base^k) base^k``.  ``f`` may be a callable or
        a coefficient sequence of a polynomial; polynomials are integrated
        exactly via moments, callables by truncating once the running terms
        fall below tolerance.
    ``one_to_infinity``
        ``(1/base - 1) sum_m f(base^-m) base^-m`` over the outward grid.  ``f``
        is a sequence of grid values (finitely supported) or a callable with
        an explicit ``terms`` cap.
    """
    ctx = _ctx(ctx)
    b = ctx.q if base is None else base
    if orientation == "zero_to_a":
        if not callable(f):
            return _poly_moment(list(f), a, b)
        if ctx.is_exact:
            raise ExactModeUnsupported("jackson_integral: a callable integrand needs float mode; pass polynomial coefficients")
        bn, an = _num(b), _num(a)
        if not (0 < abs(bn) < 1):
            raise DomainError("base: need 0 < |base| < 1")
        total = 0.0
        weight = 1.0
        small = 0
        for k in range(ctx.max_terms if terms is None else terms):
            term = f(an * weight) * weight
            total += term
            weight *= bn
            if abs(term) * 1 / (1 - abs(bn)) < ctx.eps * _TAIL_SAFETY * max(1.0, abs(total)):
                small += 1
                if small >= 3:
                    return an * (1 - bn) * total
            else:
                small = 0
        if terms is not None:
            return an * (1 - bn) * total
        raise NonConvergenceError("jackson_integral: tail bound not reached within max_terms")
    if orientation == "one_to_infinity":
        if callable(f):
            if terms is None:
                raise ValidationError("terms: a callable integrand on the outward grid needs an explicit term cap")
            values = [f(b ** (-m)) for m in range(terms)]
        else:
            values = list(f)
        total = 0
        for m, v in enumerate(values):
            if v != 0:
                total = total + v * b ** (-m)
        return (1 / b - 1) * total
    raise ValidationError(f"orientation: unknown value {orientation!r}")


# ---------------------------------------------------------------------------
# Basic hypergeometric series
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HyperSpec:
    """Parameters of ``r_phi_s(upper; lower; base, arg)``."""

    upper: tuple = field(default_factory=tuple)
    lower: tuple = field(default_factory=tuple)
    base: object = None
    arg: object = None

    def __post_init__(self):
        object.__setattr__(self, "upper", tuple(self.upper))
        object.__setattr__(self, "lower", tuple(self.lower))

    @property
    def r(self) -> int:
        return len(self.upper)

    @property
    def s(self) -> int:
        return len(self.lower)


def _terminating_index(a, base, limit: int = 512) -> int | None:
    """n with ``a == base**-n`` (n >= 0), else None."""
    if a == 1:
        return 0
    if a == 0:
        return None
    if _is_exact_scalar(a) and _is_exact_scalar(base):
        if isinstance(a, (int, Fraction, Surd)) and isinstance(base, (int, Fraction, Surd)):
            af, bf = abs(float(a)), abs(float(base))
            if not (0 < bf < 1) or af < 1:
                return None
            guess = round(math.log(af) / -math.log(bf))
            for n in (guess - 1, guess, guess + 1):
                if n >= 0 and a * base**n == 1:
                    return n
            return None
        # symbolic field elements: compare degrees of numerator and denominator
        try:
            deg = a.denom.degree() - a.numer.degree()
            bdeg = base.numer.degree() - base.denom.degree()
        except AttributeError:
            return None
        if bdeg <= 0 or deg % bdeg:
            return None
        n = deg // bdeg
        if n >= 0 and a * base**n == 1:
            return n
        return None
    av, bv = _num(a), _num(base)
    if abs(av) < 1 or not (0 < abs(bv) < 1):
        return None
    n = round(math.log(abs(av)) / -math.log(abs(bv)))
    if n < 0 or n > limit:
        return None
    if abs(av * bv**n - 1) < 1e-12:
        return n
    return None


def basic_hyper(spec: HyperSpec, trunc: int | None = None, ctx: QContext | None = None, return_bound: bool = False):
    """Sum the basic hypergeometric series described by ``spec``.

    The k-th term is
    ``prod(a_i;b)_k / (prod(b_j;b)_k (b;b)_k) * ((-1)^k b^(k(k-1)/2))^(1+s-r) z^k``.
    A series with an upper parameter ``base**-n`` stops after ``n`` and is
    summed exactly.  Otherwise the partial sums run until a geometric bound
    on the remainder is below tolerance or ``trunc`` terms were used.
    """
    ctx = _ctx(ctx)
    base = ctx.q if spec.base is None else spec.base
    z = spec.arg
    if z is None:
        raise ValidationError("arg: series argument is required")
    r, s = spec.r, spec.s
    expo = 1 + s - r
    stops = [n for n in (_terminating_index(a, base) for a in spec.upper) if n is not None]
    n_stop = min(stops) if stops else None

    if n_stop is None:
        if ctx.is_exact:
            raise ExactModeUnsupported("basic_hyper: nonterminating series needs float mode")
        if r > s + 1 and z != 0:
            raise DomainError("arg: a nonterminating series with r > s+1 diverges")
        if r == s + 1 and abs(_num(z)) >= 1:
            raise DomainError(f"arg: |z| must be < 1 for a nonterminating r = s+1 series, got {z}")

    if n_stop is not None or ctx.is_exact:
        upper, lower, b, zz = spec.upper, spec.lower, base, z
    else:
        upper = tuple(_num(a) for a in spec.upper)
        lower = tuple(_num(c) for c in spec.lower)
        b, zz = _num(base), _num(z)

    total = 0
    term = 1
    bk = 1  # base**k
    limit = (n_stop + 1) if n_stop is not None else (trunc if trunc is not None else ctx.max_terms)
    tail = 0.0
    for k in range(limit):
        total = total + term
        if k + 1 >= limit:
            break
        num = 1
        for a in upper:
            num = num * (1 - a * bk)
        den = 1 - b * bk
        for c in lower:
            den = den * (1 - c * bk)
        if den == 0:
            raise DomainError("lower: a lower parameter makes a denominator factor vanish")
        ratio = num / den * zz
        if expo > 0:
            ratio = ratio * ((-bk) ** expo)
        elif expo < 0:
            ratio = ratio / ((-bk) ** (-expo))
        term = term * ratio
        bk = bk * b
        if term == 0 and n_stop is None:
            return (total, 0.0) if return_bound else total
        if n_stop is None:
            rho = abs(ratio)
            if r == s + 1:
                rho = max(rho, abs(zz))
            if rho < 1:
                tail = abs(term) / (1 - rho)
                if tail < ctx.eps * _TAIL_SAFETY * max(1.0, abs(total)) and k >= 2:
                    total = total + term
                    return (total, tail) if return_bound else total
    if n_stop is None and trunc is None:
        raise NonConvergenceError(f"basic_hyper: no convergence within {limit} terms")
    return (total, tail) if return_bound else total


# ---------------------------------------------------------------------------
# q-exponentials and difference quotients
# ---------------------------------------------------------------------------


def q_exp(z, kind: str = "small_e", ctx: QContext | None = None, base=None):
    """The q-exponentials, summed from their power series.

    ``small_e``: ``sum z^n / (q;q)_n`` (equal to ``1/(z;q)_inf``, |z| < 1).
    ``big_E``:   ``sum q^(n(n-1)/2) z^n / (q;q)_n`` (equal to ``(-z;q)_inf``).
    """
    ctx = _ctx(ctx)
    b = ctx.q if base is None else base
    if z == 0:
        return ctx.one if ctx.is_exact else 1.0
    if ctx.is_exact:
        raise ExactModeUnsupported("q_exp: infinite series needs float mode")
    zz, bb = _num(z), _num(b)
    if kind == "small_e":
        if abs(zz) >= 1:
            raise DomainError(f"z: small_e needs |z| < 1, got {z}")
        spec = HyperSpec((0,), (), bb, zz)
        return basic_hyper(spec, ctx=ctx)
    if kind == "big_E":
        spec = HyperSpec((), (), bb, -zz)
        return basic_hyper(spec, ctx=ctx)
    raise ValidationError(f"kind: unknown q-exponential {kind!r}")


def q_diff(f: Callable, x, variant: str = "minus", ctx: QContext | None = None, base=None):
    """q-difference quotients.

    ``minus``:     ``(f(x) - f(qx)) / (x - qx)``
    ``plus``:      ``(f(x/q) - f(x)) / (x - qx)``
    ``symmetric``: ``(f(x/q) - f(qx)) / (x/q - qx)``
    """
    ctx = _ctx(ctx)
    b = ctx.q if base is None else base
    if x == 0:
        raise DomainError("x: difference quotient is singular at 0")
    if variant == "minus":
        return (f(x) - f(b * x)) / (x - b * x)
    if variant == "plus":
        return (f(x / b) - f(x)) / (x - b * x)
    if variant == "symmetric":
        return (f(x / b) - f(b * x)) / (x / b - b * x)
    raise ValidationError(f"variant: unknown difference quotient {variant!r}")
