"""Elements of the quantum disc algebra and its finite functions.

An element f acts on the monomial vectors ``v_n = z^n e_0`` of the Fock
space by ``f v_n = sum_m M_m(n) v_{n+m}``.  Each weight m is stored as

* a polynomial ``P_m`` in ``Y = q^(2n)`` (coefficient tuple, lowest first), and
* a finite correction ``fin_m: n -> value``,

so that ``M_m(n) = P_m(q^(2n)) + fin_m(n)`` for ``n >= 0``.  For ``m < 0`` the
entries with ``n < -m`` are zero; the correction stores ``-P_m`` there.  Both
parts are uniquely determined by the operator, so equality of elements is
equality of the stored data.

The radial coefficients of the canonical form ``sum z^m psi_m(y) +
sum psi_{-m}(y) z*^m`` are recovered by :meth:`PolElement.psi`.
"""

from __future__ import annotations

import math
import random
import re
from fractions import Fraction
from typing import Callable, Iterable

import numpy as np

from ..context import QContext, format_scalar
from ..errors import NonFiniteElementError, ValidationError

__all__ = [
    "PolElement",
    "act_generator",
    "casimir_apply",
    "fock_matrix",
    "invariant_integral",
    "laplacian_apply",
    "pol_multiply",
    "pol_normal_form",
    "random_finite_element",
    "random_polynomial_element",
]


# ---------------------------------------------------------------------------
# coefficient-tuple polynomials
# ---------------------------------------------------------------------------


def _trim(p) -> tuple:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return tuple(p)


def _padd(a, b) -> tuple:
    n = max(len(a), len(b))
    return _trim((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n))


def _pscale(a, c) -> tuple:
    return _trim(x * c for x in a)


def _pmul(a, b) -> tuple:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return _trim(out)


def _parg(a, r) -> tuple:
    """P(r*Y) from P(Y)."""
    out, rk = [], 1
    for x in a:
        out.append(x * rk)
        rk = rk * r
    return _trim(out)


def _peval(a, y):
    acc = 0
    for x in reversed(a):
        acc = acc * y + x
    return acc


def _pdivexact(a, b) -> tuple:
    a = list(a)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    db = len(b) - 1
    out = [0] * max(len(a) - db, 0)
    for i in range(len(a) - 1 - db, -1, -1):
        c = a[i + db] / b[db]
        out[i] = c
        for j, y in enumerate(b):
            a[i + j] = a[i + j] - c * y
    if any(x != 0 for x in a[:db]):
        raise ValidationError("element: radial coefficient is not divisible as required")
    return _trim(out)


def _ck_poly(ctx: QContext, k: int) -> tuple:
    """c_k(Y) = prod_{t<k} (1 - q^{-2t} Y)."""
    p = (ctx.one,)
    for t in range(k):
        p = _pmul(p, (ctx.one, -ctx.qpow(-2 * t)))
    return p


# ---------------------------------------------------------------------------
# the element class
# ---------------------------------------------------------------------------


class PolElement:
    """Immutable element of Pol(C)_q extended by finite functions."""

    __slots__ = ("ctx", "comps")

    def __init__(self, ctx: QContext, comps: dict | None = None):
        self.ctx = ctx
        clean = {}
        for m, (poly, fin) in (comps or {}).items():
            poly, fin = _normalize(ctx, m, _trim(poly), dict(fin))
            if poly or fin:
                clean[m] = (poly, fin)
        self.comps = clean

    # -- constructors ------------------------------------------------------
    @classmethod
    def zero(cls, ctx: QContext) -> "PolElement":
        return cls(ctx)

    @classmethod
    def scalar(cls, ctx: QContext, c) -> "PolElement":
        return cls(ctx, {0: ((ctx.K(c) if not _is_field_elem(c) else c,), {})})

    @classmethod
    def one(cls, ctx: QContext) -> "PolElement":
        return cls.scalar(ctx, 1)

    @classmethod
    def z(cls, ctx: QContext) -> "PolElement":
        return cls(ctx, {1: ((ctx.one,), {})})

    @classmethod
    def zs(cls, ctx: QContext) -> "PolElement":
        """z*, acting as v_n -> (1 - q^2n) v_{n-1}."""
        return cls(ctx, {-1: ((ctx.one, -ctx.one), {})})

    @classmethod
    def y(cls, ctx: QContext) -> "PolElement":
        """y = 1 - z z*."""
        return cls(ctx, {0: ((ctx.zero, ctx.one), {})})

    @classmethod
    def f(cls, ctx: QContext, j: int = 0) -> "PolElement":
        """The finite function f_j, the projector onto e_j."""
        if j < 0:
            raise ValidationError(f"j: must be nonnegative, got {j}")
        return cls(ctx, {0: ((), {j: ctx.one})})

    @classmethod
    def monomial(cls, ctx: QContext, a: int, b: int) -> "PolElement":
        """z^a z*^b."""
        if a < 0 or b < 0:
            raise ValidationError("monomial: exponents must be nonnegative")
        return cls(ctx, {a - b: (_ck_poly(ctx, b), {})})

    @classmethod
    def from_psi(cls, ctx: QContext, m: int, poly: Iterable = (), grid: dict | None = None) -> "PolElement":
        """z^m psi(y) for m >= 0, psi(y) z*^|m| for m < 0.

        ``poly`` lists the coefficients of psi in y; ``grid`` gives finitely
        many additional values psi(q^2j) on top of the polynomial.
        """
        poly = _trim(ctx.K(c) if not _is_field_elem(c) else c for c in poly)
        grid = {int(j): (ctx.K(v) if not _is_field_elem(v) else v) for j, v in (grid or {}).items()}
        if any(j < 0 for j in grid):
            raise ValidationError("grid: indices must be nonnegative")
        if m >= 0:
            return cls(ctx, {m: (poly, grid)})
        k = -m
        ck = _ck_poly(ctx, k)
        mpoly = _pmul(_parg(poly, ctx.qpow(-2 * k)), ck)
        fin = {j + k: v * _peval(ck, ctx.qpow(2 * (j + k))) for j, v in grid.items()}
        return cls(ctx, {m: (mpoly, fin)})

    @classmethod
    def radial(cls, ctx: QContext, values) -> "PolElement":
        """Weight-0 finite element with psi(q^2j) = values[j]."""
        return cls.from_psi(ctx, 0, (), dict(enumerate(values)))

    # -- access ------------------------------------------------------------
    def weights(self) -> list:
        return sorted(self.comps)

    def value(self, m: int, n: int):
        """Matrix coefficient M_m(n) in the monomial basis."""
        if n < 0:
            return self.ctx.zero
        comp = self.comps.get(m)
        if comp is None:
            return self.ctx.zero
        poly, fin = comp
        return _peval(poly, self.ctx.qpow(2 * n)) + fin.get(n, 0)

    def is_finite(self) -> bool:
        return all(not poly for poly, _ in self.comps.values())

    def is_polynomial(self) -> bool:
        return all(not fin for _, fin in self.comps.values())

    def fin_extent(self) -> int:
        """One more than the largest index carrying a finite correction."""
        return max((max(fin) + 1 for _, fin in self.comps.values() if fin), default=0)

    def psi(self, m: int):
        """Radial coefficient of weight m as ``(poly_in_y, grid_corrections)``."""
        ctx = self.ctx
        comp = self.comps.get(m)
        if comp is None:
            return (), {}
        poly, fin = comp
        if m >= 0:
            return poly, dict(fin)
        k = -m
        ck_shift = _parg(_ck_poly(ctx, k), ctx.qpow(2 * k))
        ppoly = _pdivexact(_parg(poly, ctx.qpow(2 * k)), ck_shift)
        grid = {}
        for n, v in fin.items():
            j = n - k
            if j < 0:
                continue
            true = (self.value(m, n)) / _peval(ck_shift, ctx.qpow(2 * j))
            corr = true - _peval(ppoly, ctx.qpow(2 * j))
            if corr != 0:
                grid[j] = corr
        return ppoly, grid

    # -- arithmetic --------------------------------------------------------
    def _same(self, other: "PolElement"):
        if self.ctx != other.ctx:
            raise ValidationError("elements belong to different contexts")

    def __add__(self, other):
        if not isinstance(other, PolElement):
            other = PolElement.scalar(self.ctx, other)
        self._same(other)
        out = dict(self.comps)
        for m, (p, f) in other.comps.items():
            if m in out:
                p0, f0 = out[m]
                fin = dict(f0)
                for n, v in f.items():
                    fin[n] = fin.get(n, 0) + v
                out[m] = (_padd(p0, p), fin)
            else:
                out[m] = (p, f)
        return PolElement(self.ctx, out)

    __radd__ = __add__

    def __neg__(self):
        return self * (-1)

    def __sub__(self, other):
        if not isinstance(other, PolElement):
            other = PolElement.scalar(self.ctx, other)
        return self + (-other)

    def __rsub__(self, other):
        return PolElement.scalar(self.ctx, other) - self

    def scale(self, c) -> "PolElement":
        return PolElement(
            self.ctx, {m: (_pscale(p, c), {n: v * c for n, v in f.items()}) for m, (p, f) in self.comps.items()}
        )

    def __mul__(self, other):
        if isinstance(other, PolElement):
            return pol_multiply(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, k: int):
        out = PolElement.one(self.ctx)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, PolElement):
            return self.ctx == other.ctx and self.comps == other.comps
        return self == PolElement.scalar(self.ctx, other)

    def __hash__(self):
        return hash(tuple(sorted((m, p, tuple(sorted(f.items()))) for m, (p, f) in self.comps.items())))

    def is_zero(self) -> bool:
        return not self.comps

    def adjoint(self) -> "PolElement":
        """The involution: (z^m psi)* = conj(psi) z*^m."""
        out = PolElement.zero(self.ctx)
        for m in self.comps:
            poly, grid = self.psi(m)
            out = out + PolElement.from_psi(
                self.ctx, -m, tuple(_conj(c) for c in poly), {j: _conj(v) for j, v in grid.items()}
            )
        return out

    # -- the z^a z*^b basis ---------------------------------------------------
    def decompose(self) -> dict:
        """Coefficients in the basis z^a z*^b (polynomial elements only)."""
        if not self.is_polynomial():
            raise ValidationError("decompose: element has a finite-function part")
        ctx = self.ctx
        out = {}
        for m, (poly, _) in self.comps.items():
            b0 = max(0, -m)
            a0 = max(0, m)
            rem = list(poly)
            deg = len(rem) - 1
            if deg < b0:
                raise ValidationError("decompose: weight component is not divisible as required")
            coeffs = {}
            for i in range(deg - b0, -1, -1):
                basis = _ck_poly(ctx, b0 + i)
                c = rem[b0 + i] / basis[-1] if b0 + i < len(rem) else 0
                if c != 0:
                    coeffs[i] = c
                    for t, bt in enumerate(basis):
                        rem[t] = rem[t] - c * bt
            if any(x != 0 for x in rem):
                raise ValidationError("decompose: weight component is not divisible as required")
            for i, c in coeffs.items():
                out[(a0 + i, b0 + i)] = c
        return out

    def to_ncpoly(self, alphabet=None):
        """The element as a noncommutative polynomial in the letters z, zs."""
        from ..ncgroebner import Alphabet, NCPoly

        A = alphabet if alphabet is not None else Alphabet(("zs", "z"))
        terms = {}
        for (a, b), c in self.decompose().items():
            terms[A.word(["z"] * a + ["zs"] * b)] = c
        return NCPoly(A, terms)

    # -- presentation --------------------------------------------------------
    def to_json(self) -> dict:
        out = {}
        for m in self.weights():
            poly, grid = self.psi(m)
            out[str(m)] = {
                "poly_in_y": [format_scalar(c) for c in poly],
                "grid": {str(j): format_scalar(v) for j, v in sorted(grid.items())},
            }
        return out

    def __repr__(self) -> str:
        parts = []
        for m in self.weights():
            poly, grid = self.psi(m)
            desc = " + ".join(f"{_coef_text(c)}*y^{i}" for i, c in enumerate(poly) if c != 0)
            if grid:
                desc = (desc + " + " if desc else "") + " + ".join(
                    f"{_coef_text(v)}*f_{j}" for j, v in sorted(grid.items())
                )
            left = f"z^{m} " if m > 0 else ""
            right = f" z*^{-m}" if m < 0 else ""
            parts.append(f"{left}[{desc}]{right}")
        return "PolElement(" + (" + ".join(parts) if parts else "0") + ")"


def _coef_text(c) -> str:
    text = str(c)
    # parenthesize sums so that "(1 - s**4)*y^2" is not misread
    return f"({text})" if re.search(r"[^(eE]\s*[-+]", text[1:]) else text


def _is_field_elem(x) -> bool:
    return not isinstance(x, (int, float, Fraction, complex))


def _conj(c):
    return c.conjugate() if isinstance(c, complex) else c


def _normalize(ctx: QContext, m: int, poly: tuple, fin: dict):
    # entries below the domain of a negative weight are zero by definition
    for n in range(max(0, -m)):
        fin[n] = -_peval(poly, ctx.qpow(2 * n))
    fin = {n: v for n, v in fin.items() if v != 0 and n >= 0}
    return poly, fin


def _component(ctx: QContext, m: int, poly: tuple, true_value: Callable, candidates: Iterable) -> tuple:
    fin = {}
    for n in sorted(set(c for c in candidates if c >= 0)):
        if m < 0 and n < -m:
            continue
        corr = true_value(n) - _peval(poly, ctx.qpow(2 * n))
        if corr != 0:
            fin[n] = corr
    return poly, fin


def _candidates(fin_sets: Iterable, span: int) -> set:
    out = set(range(0, span + 1))
    for fin in fin_sets:
        for n in fin:
            out.update((n - 1, n, n + 1))
    return out


# ---------------------------------------------------------------------------
# products
# ---------------------------------------------------------------------------


def pol_multiply(f: PolElement, g: PolElement) -> PolElement:
    """The product fg (g acts first on the Fock space)."""
    f._same(g)
    ctx = f.ctx
    out: dict = {}
    for a, (pa, fa) in f.comps.items():
        for b, (pb, fb) in g.comps.items():
            m = a + b
            poly = _pmul(_parg(pa, ctx.qpow(2 * b)), pb)
            cands = set(fb) | {n - b for n in fa}
            cands |= set(range(0, max(0, -b, -m) + 1))

            def true(n, a=a, b=b):
                return f.value(a, n + b) * g.value(b, n)

            _, fin = _component(ctx, m, poly, true, cands)
            if m in out:
                p0, f0 = out[m]
                merged = dict(f0)
                for n, v in fin.items():
                    merged[n] = merged.get(n, 0) + v
                out[m] = (_padd(p0, poly), merged)
            else:
                out[m] = (poly, fin)
    return PolElement(ctx, out)


# ---------------------------------------------------------------------------
# normal form of words in z, z*
# ---------------------------------------------------------------------------


def pol_normal_form(expr, ctx: QContext | None = None) -> PolElement:
    """Canonical element of a noncommutative polynomial in the letters z, zs.

    Q(s) coefficients (as produced by the relation parser) are specialized
    to the context's q when the context is not symbolic.
    """
    from ..ncgroebner import NCPoly, specialize

    if not isinstance(expr, NCPoly):
        raise ValidationError("pol_normal_form: expected an NCPoly over the letters z, zs")
    ctx = ctx or QContext.symbolic()
    letters = set(expr.alphabet.letters)
    if not letters <= {"z", "zs"}:
        raise ValidationError(f"pol_normal_form: alphabet must be {{z, zs}}, got {sorted(letters)}")
    if ctx.mode != "symbolic":
        expr = specialize(expr, ctx)
    gens = {"z": PolElement.z(ctx), "zs": PolElement.zs(ctx)}
    total = PolElement.zero(ctx)
    for w, c in expr.terms.items():
        term = PolElement.one(ctx)
        for r in w:
            term = term * gens[expr.alphabet.name(r)]
        total = total + term.scale(c)
    return total


# ---------------------------------------------------------------------------
# generator actions
# ---------------------------------------------------------------------------


def act_generator(gen: str, f: PolElement) -> PolElement:
    """Action of K, Kinv, E or F on an element."""
    ctx = f.ctx
    q2 = ctx.qpow(2)
    one = ctx.one
    out: dict = {}

    def put(m, poly, fin):
        if m in out:
            p0, f0 = out[m]
            merged = dict(f0)
            for n, v in fin.items():
                merged[n] = merged.get(n, 0) + v
            out[m] = (_padd(p0, poly), merged)
        else:
            out[m] = (poly, fin)

    if gen in ("K", "Kinv"):
        sign = 1 if gen == "K" else -1
        return PolElement(
            ctx,
            {
                m: (_pscale(p, ctx.qpow(2 * m * sign)), {n: v * ctx.qpow(2 * m * sign) for n, v in fin.items()})
                for m, (p, fin) in f.comps.items()
            },
        )
    if gen == "E":
        k = -ctx.s / (one - q2)
        for m, (poly, fin) in f.comps.items():
            qm = ctx.qpow(2 * m)
            new = _pscale(_padd(poly, _pscale(_parg(poly, q2), -qm)), k)

            def true(n, m=m, qm=qm):
                return k * (f.value(m, n) - qm * f.value(m, n + 1))

            put(m + 1, *_component(ctx, m + 1, new, true, _candidates([fin], abs(m) + 2)))
        return PolElement(ctx, out)
    if gen == "F":
        k = -ctx.spow(5) / (one - q2)
        for m, (poly, fin) in f.comps.items():
            qmi = ctx.qpow(-2 * m)
            shifted = _pmul((one, -one), _parg(poly, ctx.qpow(-2)))
            new = _pscale(_padd(shifted, _pscale(_pmul((qmi, -one), poly), -1)), k)

            def true(n, m=m, qmi=qmi):
                y = ctx.qpow(2 * n)
                return k * ((one - y) * f.value(m, n - 1) - (qmi - y) * f.value(m, n))

            put(m - 1, *_component(ctx, m - 1, new, true, _candidates([fin], abs(m) + 2)))
        return PolElement(ctx, out)
    raise ValidationError(f"gen: unknown generator {gen!r}; choose K, Kinv, E or F")


def casimir_apply(f: PolElement) -> PolElement:
    """C = EF + (q^-1 K + q K^-1 - (q^-1 + q)) / (q^-1 - q)^2."""
    ctx = f.ctx
    q, qi = ctx.q, ctx.qpow(-1)
    ef = act_generator("E", act_generator("F", f))
    rest = act_generator("K", f).scale(qi) + act_generator("Kinv", f).scale(q) - f.scale(qi + q)
    return ef + rest.scale(ctx.one / ((qi - q) * (qi - q)))


def laplacian_apply(f: PolElement) -> PolElement:
    """The invariant Laplacian, -q^-1 times the Casimir."""
    return casimir_apply(f).scale(-f.ctx.qpow(-1))


# ---------------------------------------------------------------------------
# Fock matrices and the integral
# ---------------------------------------------------------------------------


def fock_matrix(f: PolElement, N: int, basis: str = "orthonormal") -> np.ndarray:
    """N x N truncation of T_F(f).

    ``basis="orthonormal"`` uses e_n (floats); ``basis="monomial"`` uses
    v_n = z^n e_0 and keeps the context's exact scalars (object array).
    Row/column indices below ``N - max positive weight`` are untouched by
    truncation.
    """
    if N < 1:
        raise ValidationError(f"N: must be >= 1, got {N}")
    ctx = f.ctx
    if basis == "monomial":
        M = np.empty((N, N), dtype=object)
        M[:, :] = ctx.zero
        for m in f.comps:
            for n in range(N):
                if 0 <= n + m < N:
                    M[n + m, n] = f.value(m, n)
        return M
    if basis != "orthonormal":
        raise ValidationError(f"basis: unknown basis {basis!r}")
    fctx = ctx.to_float_context()
    q2 = fctx.q**2
    lognorm = [0.0]
    for n in range(1, N):
        lognorm.append(lognorm[-1] + math.log1p(-(q2**n)))
    dtype = complex if any(isinstance(v, complex) for p, fin in f.comps.values() for v in (*p, *fin.values())) else float
    M = np.zeros((N, N), dtype=dtype)
    for m in f.comps:
        for n in range(N):
            if 0 <= n + m < N:
                v = f.value(m, n)
                M[n + m, n] = (v if isinstance(v, complex) else float(v)) * math.exp(0.5 * (lognorm[n + m] - lognorm[n]))
    return M


def invariant_integral(f: PolElement):
    """(1 - q^2) sum_n M_0(n) q^-2n, defined for finite elements."""
    if not f.is_finite():
        raise NonFiniteElementError("f: the invariant integral is defined only for finite elements")
    ctx = f.ctx
    comp = f.comps.get(0)
    if comp is None:
        return ctx.zero
    total = ctx.zero
    for n, v in comp[1].items():
        total = total + v * ctx.qpow(-2 * n)
    return (ctx.one - ctx.qpow(2)) * total


# ---------------------------------------------------------------------------
# random elements for property checks
# ---------------------------------------------------------------------------


def _rand_scalar(rng: random.Random, ctx: QContext):
    v = Fraction(rng.randint(-9, 9), rng.randint(1, 5))
    return ctx.K(v)


def random_finite_element(
    rng: random.Random, ctx: QContext, max_support: int = 6, max_weight: int = 4, terms: int = 4
) -> PolElement:
    """Finite element whose nonzero Fock entries have column index <= max_support."""
    out = PolElement.zero(ctx)
    for _ in range(terms):
        m = rng.randint(-max_weight, max_weight)
        j = rng.randint(0, max_support)
        out = out + PolElement.from_psi(ctx, m, (), {j: _rand_scalar(rng, ctx)})
    return out


def random_polynomial_element(rng: random.Random, ctx: QContext, max_deg: int = 3, terms: int = 3) -> PolElement:
    out = PolElement.zero(ctx)
    for _ in range(terms):
        a, b = rng.randint(0, max_deg), rng.randint(0, max_deg)
        out = out + PolElement.monomial(ctx, a, b).scale(_rand_scalar(rng, ctx))
    return out
