"""Deformation parameter, arithmetic mode and scalar plumbing.

Every computation in the package is driven by a :class:`QContext`.  Three
arithmetic modes exist:

``exact``
    q is a :class:`~fractions.Fraction`.  Its square root s is a Fraction
    when q is a perfect square and a :class:`Surd` (an element of Q(sqrt q))
    otherwise, so half-integer powers of q stay exact.
``float``
    q is a Python float; complex values appear only where a spectral
    parameter is complex.
``symbolic``
    scalars live in the rational function field Q(s) with q = s**2,
    provided by sympy's sparse fraction fields.

Algorithms that only need field operations are written once and run in all
three modes.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Any, Union

from .errors import DomainError, ExactModeUnsupported, ValidationError

__all__ = [
    "Surd",
    "QContext",
    "parse_q",
    "rational_sqrt",
    "symbolic_field",
    "to_complex",
    "to_float",
    "format_scalar",
]


def rational_sqrt(x: Fraction) -> Fraction | None:
    """Exact square root of a nonnegative rational, or None."""
    x = Fraction(x)
    if x < 0:
        return None
    n, d = x.numerator, x.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


class Surd:
    """The number ``a + b*sqrt(d)`` with rational a, b and fixed rational d.

    d is assumed not to be a rational square, which makes the representation
    unique and turns the set of such numbers into a field.
    """

    __slots__ = ("a", "b", "d")

    def __init__(self, a, b, d):
        self.a = Fraction(a)
        self.b = Fraction(b)
        self.d = Fraction(d)

    # -- coercion ---------------------------------------------------------
    def _lift(self, other):
        if isinstance(other, Surd):
            if other.d != self.d:
                raise ValidationError("surds over different radicands")
            return other
        if isinstance(other, (int, Fraction, Rational)):
            return Surd(other, 0, self.d)
        return None

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return complex(self) + other if isinstance(other, complex) else float(self) + other
        return Surd(self.a + o.a, self.b + o.b, self.d)

    __radd__ = __add__

    def __neg__(self):
        return Surd(-self.a, -self.b, self.d)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return float(self) - other
        return Surd(self.a - o.a, self.b - o.b, self.d)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return other - float(self)
        return Surd(o.a - self.a, o.b - self.b, self.d)

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return float(self) * other
        return Surd(self.a * o.a + self.b * o.b * self.d, self.a * o.b + self.b * o.a, self.d)

    __rmul__ = __mul__

    def inverse(self) -> "Surd":
        norm = self.a * self.a - self.b * self.b * self.d
        if norm == 0:
            raise ZeroDivisionError("division by zero surd")
        return Surd(self.a / norm, -self.b / norm, self.d)

    def __truediv__(self, other):
        o = self._lift(other)
        if o is None:
            return float(self) / other
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is None:
            return other / float(self)
        return o * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return float(self) ** n
        if n < 0:
            return self.inverse() ** (-n)
        result = Surd(1, 0, self.d)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- comparison -------------------------------------------------------
    def sign(self) -> int:
        """Exact sign of the real number represented."""
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sb == 0:
            return sa
        if sa == 0 or sa == sb:
            return sb if sa == 0 else sa
        # opposite signs: compare a^2 with b^2 d
        lhs, rhs = self.a * self.a, self.b * self.b * self.d
        if lhs == rhs:
            return 0
        return sa if lhs > rhs else sb

    def __eq__(self, other):
        if isinstance(other, float):
            return float(self) == other
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __float__(self):
        return float(self.a) + float(self.b) * math.sqrt(self.d)

    def __complex__(self):
        return complex(float(self))

    def conjugate(self):
        return self

    @property
    def real(self):
        return self

    @property
    def imag(self):
        return Fraction(0)

    def __repr__(self):
        return f"Surd({self.a}, {self.b}, {self.d})"

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        rad = f"sqrt({self.d})"
        if self.a == 0:
            return f"{self.b}*{rad}"
        sign = "+" if self.b > 0 else "-"
        return f"{self.a} {sign} {abs(self.b)}*{rad}"


@lru_cache(maxsize=1)
def symbolic_field():
    """Return ``(K, s)``: the field Q(s) and its generator."""
    from sympy import QQ
    from sympy.polys.fields import field

    K, s = field("s", QQ)
    return K, s


def parse_q(text: Union[str, float, int, Fraction], exact: bool = True):
    """Parse a q literal such as ``"1/2"``, ``"0.25"`` or ``0.5``.

    In exact mode a decimal literal is accepted only when it denotes the
    rational number written (``"0.25"`` is 1/4); binary floats are rejected
    because their exact value is almost never what was meant.
    """
    if isinstance(text, Fraction):
        value = text
    elif isinstance(text, int):
        value = Fraction(text)
    elif isinstance(text, float):
        if exact:
            raise ValidationError("q: a binary float cannot be used in exact mode; pass a string such as '1/2'")
        return text
    else:
        t = str(text).strip()
        try:
            value = Fraction(t)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValidationError(f"q: cannot parse {text!r}") from exc
    if not exact:
        return float(value)
    return value


def to_complex(x) -> complex:
    if isinstance(x, complex):
        return x
    if hasattr(x, "numer") and hasattr(x, "denom"):
        raise ExactModeUnsupported("symbolic value has no numeric value")
    return complex(x)


def to_float(x) -> float:
    if isinstance(x, complex):
        if abs(x.imag) > 1e-9 * max(1.0, abs(x.real)):
            raise DomainError(f"value {x} is not real")
        return x.real
    return float(x)


def format_scalar(x) -> Any:
    """JSON-friendly rendering: exact values as strings, floats as numbers."""
    if isinstance(x, bool):
        return x
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, Surd):
        return str(x)
    if isinstance(x, complex):
        if x.imag == 0:
            return x.real
        return {"re": x.real, "im": x.imag}
    if isinstance(x, float):
        return x
    if hasattr(x, "as_expr"):
        return str(x.as_expr())
    return str(x)


@dataclass(frozen=True)
class QContext:
    """The deformation parameter together with the arithmetic policy.

    ``q`` is given either as a rational (exact mode), a float, or left to the
    symbolic field.  ``eps`` is the tolerance used by every truncated series
    and ``max_terms`` caps the number of terms any single series may use.
    """

    q: Any = Fraction(1, 2)
    mode: str = "exact"
    eps: float = 1e-12
    max_terms: int = 10000
    _s: Any = dc_field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.mode not in ("exact", "float", "symbolic"):
            raise ValidationError(f"mode: unknown arithmetic mode {self.mode!r}")
        if self.mode == "symbolic":
            K, s = symbolic_field()
            object.__setattr__(self, "q", s**2)
            object.__setattr__(self, "_s", s)
            return
        if self.mode == "exact":
            q = parse_q(self.q, exact=True)
            if not (0 < q < 1):
                raise DomainError(f"q: must lie in (0, 1), got {q}")
            root = rational_sqrt(q)
            s = root if root is not None else Surd(0, 1, q)
            object.__setattr__(self, "q", q)
            object.__setattr__(self, "_s", s)
        else:
            q = float(self.q) if not isinstance(self.q, str) else float(Fraction(self.q))
            if not (0.0 < q < 1.0):
                raise DomainError(f"q: must lie in (0, 1), got {q}")
            object.__setattr__(self, "q", q)
            object.__setattr__(self, "_s", math.sqrt(q))
        if self.eps <= 0:
            raise ValidationError("eps: must be positive")
        if self.max_terms < 1:
            raise ValidationError("max_terms: must be positive")

    # -- constructors -----------------------------------------------------
    @classmethod
    def exact(cls, q="1/2", **kw) -> "QContext":
        return cls(q=q, mode="exact", **kw)

    @classmethod
    def floating(cls, q=0.5, **kw) -> "QContext":
        return cls(q=q, mode="float", **kw)

    @classmethod
    def symbolic(cls, **kw) -> "QContext":
        return cls(q=None, mode="symbolic", **kw)

    def to_float_context(self) -> "QContext":
        if self.mode == "float":
            return self
        if self.mode == "symbolic":
            raise ExactModeUnsupported("symbolic context has no numeric q")
        return QContext(q=float(self.q), mode="float", eps=self.eps, max_terms=self.max_terms)

    # -- scalars ----------------------------------------------------------
    @property
    def s(self):
        """The positive square root of q."""
        return self._s

    @property
    def is_exact(self) -> bool:
        return self.mode != "float"

    @property
    def one(self):
        return self.K(1)

    @property
    def zero(self):
        return self.K(0)

    def K(self, x):
        """Coerce an int, Fraction or float into this context's scalars."""
        if self.mode == "float":
            if isinstance(x, complex):
                return x
            if hasattr(x, "numer") and hasattr(x, "denom") and not isinstance(x, Fraction):
                raise ExactModeUnsupported("symbolic value in float context")
            if isinstance(x, Surd):
                return float(x)
            return float(x) if not isinstance(x, complex) else x
        if isinstance(x, float):
            raise ExactModeUnsupported(f"float {x!r} in exact context")
        if isinstance(x, complex):
            raise ExactModeUnsupported("complex value in exact context")
        if self.mode == "symbolic":
            K, _ = symbolic_field()
            if isinstance(x, Fraction):
                from sympy import QQ

                return K(QQ(x.numerator, x.denominator))
            if isinstance(x, Surd):
                raise ExactModeUnsupported("numeric surd in symbolic context")
            return K(x)
        if isinstance(x, int):
            return Fraction(x)
        return x

    def qpow(self, k: int):
        """q**k for an integer k."""
        return self._ipow(self.q, k)

    def spow(self, k: int):
        """s**k = q**(k/2) for an integer k."""
        return self._ipow(self.s, k)

    def _ipow(self, base, k: int):
        return _cached_pow(self, base, int(k))

    def power(self, x):
        """q**x for a real or complex exponent.

        Exact when 2x is an integer; otherwise only available in float mode.
        """
        if isinstance(x, (int, Fraction)) or (isinstance(x, float) and float(x).is_integer()):
            two_x = Fraction(x) * 2
            if two_x.denominator == 1:
                return self.spow(int(two_x))
        if self.is_exact:
            raise ExactModeUnsupported(f"q**{x} is not exact in this context")
        if isinstance(x, complex):
            return cmath.exp(x * math.log(self.q)) if x.imag else self.q ** x.real
        return self.q ** float(x)

    def is_zero(self, x) -> bool:
        return x == 0

    def num(self, x) -> complex | float:
        """Numeric value of a scalar (float when real)."""
        if isinstance(x, complex):
            return x
        if self.mode == "symbolic":
            raise ExactModeUnsupported("symbolic value has no numeric value")
        return float(x)

    def describe(self) -> dict:
        return {"q": format_scalar(self.q), "mode": self.mode, "eps": self.eps, "max_terms": self.max_terms}


_POW_CACHE: dict = {}


def _cached_pow(ctx: QContext, base, k: int):
    key = (ctx.mode, repr(ctx.q), repr(base), k)
    hit = _POW_CACHE.get(key)
    if hit is not None:
        return hit
    value = base**k
    if len(_POW_CACHE) > 50000:
        _POW_CACHE.clear()
    _POW_CACHE[key] = value
    return value
