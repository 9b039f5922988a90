"""Noncommutative Gröbner bases in the free algebra over Q(s), s = q^(1/2).

Words are tuples of letter ranks.  The first letter of an alphabet is the
greatest, so a letter's rank is ``n - 1 - position`` and the deglex key of a
word is simply ``(len(w), w)``.

Coefficients are any field elements supporting ``+ - * /`` and comparison
with 0.  Presets default to the rational function field ``Q(s)`` from
:func:`qharmonic.context.symbolic_field`; passing an exact :class:`QContext`
builds them over Q or Q(sqrt q) instead.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .context import QContext, Surd, symbolic_field
from .errors import DegreeCapExceeded, ValidationError

__all__ = [
    "Alphabet",
    "NCPoly",
    "Rule",
    "RewriteSystem",
    "PRESETS",
    "complete",
    "deglex_compare",
    "diamond_check",
    "format_relation_file",
    "hilbert_dims",
    "normal_words",
    "parse_relation_file",
    "preset_algebra",
    "reduce",
    "reduce_with_certificate",
    "rewrite_system",
    "specialize",
    "specialize_scalar",
]


# ---------------------------------------------------------------------------
# alphabet and words
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Alphabet:
    """Letters listed from greatest to smallest."""

    letters: tuple

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(self.letters))
        if len(set(self.letters)) != len(self.letters):
            raise ValidationError("alphabet: repeated letter")
        for name in self.letters:
            if not re.fullmatch(r"[A-Za-z][A-Za-z0-9_]*", name):
                raise ValidationError(f"alphabet: invalid letter name {name!r}")
            if name in ("q", "s"):
                raise ValidationError("alphabet: 'q' and 's' are reserved for coefficients")

    @property
    def size(self) -> int:
        return len(self.letters)

    def rank(self, name: str) -> int:
        try:
            return self.size - 1 - self.letters.index(name)
        except ValueError:
            raise ValidationError(f"word: letter {name!r} is not in the alphabet") from None

    def name(self, rank: int) -> str:
        return self.letters[self.size - 1 - rank]

    def word(self, names: Iterable[str] | str) -> tuple:
        if isinstance(names, str):
            names = [n for n in names.split("*") if n] if "*" in names else self._split(names)
        return tuple(self.rank(n) for n in names)

    def _split(self, text: str) -> list:
        # greedy split of juxtaposed letters, longest names first
        names = sorted(self.letters, key=len, reverse=True)
        out, i = [], 0
        while i < len(text):
            for n in names:
                if text.startswith(n, i):
                    out.append(n)
                    i += len(n)
                    break
            else:
                raise ValidationError(f"word: cannot split {text!r} into letters")
        return out

    def show(self, word: tuple, sep: str = "*") -> str:
        return sep.join(self.name(r) for r in word) if word else "1"

    def __str__(self) -> str:
        return " > ".join(self.letters)


def _key(word: tuple):
    return (len(word), word)


def deglex_compare(w1: Sequence, w2: Sequence, alphabet: Alphabet | None = None) -> int:
    """-1, 0 or 1 as w1 is deglex-smaller than, equal to or greater than w2.

    With an alphabet, words may be given as letter names; otherwise they are
    rank tuples.
    """
    if alphabet is not None:
        w1 = w1 if isinstance(w1, tuple) and all(isinstance(r, int) for r in w1) else alphabet.word(w1)
        w2 = w2 if isinstance(w2, tuple) and all(isinstance(r, int) for r in w2) else alphabet.word(w2)
    k1, k2 = _key(tuple(w1)), _key(tuple(w2))
    return (k1 > k2) - (k1 < k2)


# ---------------------------------------------------------------------------
# polynomials
# ---------------------------------------------------------------------------


class NCPoly:
    """A finite linear combination of words; zero coefficients are dropped."""

    __slots__ = ("alphabet", "terms")

    def __init__(self, alphabet: Alphabet, terms: dict | None = None):
        self.alphabet = alphabet
        self.terms = {w: c for w, c in (terms or {}).items() if c != 0}

    # construction helpers
    @classmethod
    def word(cls, alphabet: Alphabet, word, coeff=1) -> "NCPoly":
        w = word if isinstance(word, tuple) else alphabet.word(word)
        return cls(alphabet, {w: coeff})

    @classmethod
    def constant(cls, alphabet: Alphabet, c) -> "NCPoly":
        return cls(alphabet, {(): c})

    def _check(self, other: "NCPoly"):
        if self.alphabet != other.alphabet:
            raise ValidationError("alphabet mismatch between polynomials")

    def _coerce(self, other):
        if isinstance(other, NCPoly):
            self._check(other)
            return other
        return NCPoly.constant(self.alphabet, other)

    def __add__(self, other):
        other = self._coerce(other)
        t = dict(self.terms)
        for w, c in other.terms.items():
            t[w] = t.get(w, 0) + c
        return NCPoly(self.alphabet, t)

    __radd__ = __add__

    def __neg__(self):
        return NCPoly(self.alphabet, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, NCPoly):
            return NCPoly(self.alphabet, {w: c * other for w, c in self.terms.items()})
        self._check(other)
        t: dict = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = w1 + w2
                t[w] = t.get(w, 0) + c1 * c2
        return NCPoly(self.alphabet, t)

    def __rmul__(self, other):
        return NCPoly(self.alphabet, {w: other * c for w, c in self.terms.items()})

    def __pow__(self, n: int):
        out = NCPoly.constant(self.alphabet, 1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, NCPoly):
            return self.alphabet == other.alphabet and self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def lead(self) -> tuple:
        if not self.terms:
            raise ValidationError("zero polynomial has no leading word")
        return max(self.terms, key=_key)

    def lead_coeff(self):
        return self.terms[self.lead()]

    def degree(self) -> int:
        return max((len(w) for w in self.terms), default=-1)

    def monic(self) -> "NCPoly":
        c = self.lead_coeff()
        return NCPoly(self.alphabet, {w: v / c for w, v in self.terms.items()})

    def map_coeffs(self, fn) -> "NCPoly":
        return NCPoly(self.alphabet, {w: fn(c) for w, c in self.terms.items()})

    def sorted_terms(self) -> list:
        """Terms from the greatest word down."""
        return sorted(self.terms.items(), key=lambda wc: _key(wc[0]), reverse=True)

    def to_text(self) -> str:
        return format_poly(self)

    def __repr__(self) -> str:
        return f"NCPoly({format_poly(self)})"


@dataclass(frozen=True)
class Rule:
    """The rewriting rule ``lead -> tail``, i.e. the relation lead - tail = 0."""

    lead: tuple
    tail: NCPoly

    def as_poly(self) -> NCPoly:
        return NCPoly.word(self.tail.alphabet, self.lead) - self.tail

    def key(self):
        return (self.lead, frozenset(self.tail.terms.items()))


@dataclass
class RewriteSystem:
    alphabet: Alphabet
    rules: list = field(default_factory=list)
    degree_cap: int | None = None
    complete: bool = False

    def __post_init__(self):
        self._index()

    def _index(self):
        self._by_lead = {r.lead: r for r in self.rules}
        self._lengths = sorted({len(r.lead) for r in self.rules})

    def find(self, word: tuple):
        """First (position, rule) whose lead occurs in ``word``, or None."""
        by_lead = self._by_lead
        for i in range(len(word)):
            for L in self._lengths:
                if i + L > len(word):
                    break
                r = by_lead.get(word[i : i + L])
                if r is not None:
                    return i, r
        return None

    def leads(self) -> list:
        return [r.lead for r in self.rules]

    def sorted_rules(self) -> list:
        return sorted(self.rules, key=lambda r: _key(r.lead), reverse=True)

    def describe(self) -> list:
        a = self.alphabet
        return [{"lead": a.show(r.lead), "tail": format_poly(r.tail)} for r in self.sorted_rules()]


# ---------------------------------------------------------------------------
# reduction
# ---------------------------------------------------------------------------


def _reduce(p: NCPoly, system: RewriteSystem, certificate: list | None = None) -> NCPoly:
    work = dict(p.terms)
    result = {}
    while work:
        w = max(work, key=_key)
        c = work.pop(w)
        hit = system.find(w)
        if hit is None:
            result[w] = c
            continue
        i, rule = hit
        u, v = w[:i], w[i + len(rule.lead) :]
        if certificate is not None:
            certificate.append((c, u, rule, v))
        for tw, tc in rule.tail.terms.items():
            nw = u + tw + v
            nc = work.get(nw, 0) + c * tc
            if nc == 0:
                work.pop(nw, None)
            else:
                work[nw] = nc
    return NCPoly(p.alphabet, result)


def reduce(p: NCPoly, system: RewriteSystem) -> NCPoly:
    """Normal form of ``p``: no word of the result contains a rule lead."""
    if p.alphabet != system.alphabet:
        raise ValidationError("alphabet mismatch between polynomial and rewrite system")
    return _reduce(p, system)


def reduce_with_certificate(p: NCPoly, system: RewriteSystem):
    """Return ``(normal_form, steps)`` where ``p = normal_form + sum c*u*(lead - tail)*v``.

    ``steps`` lists tuples ``(c, u, rule, v)`` with u and v words.
    """
    steps: list = []
    nf = _reduce(p, system, steps)
    return nf, steps


# ---------------------------------------------------------------------------
# completion
# ---------------------------------------------------------------------------


def _overlaps(r1: Rule, r2: Rule):
    """Yield (u, v) with r1.lead * v == u * r2.lead and a proper overlap."""
    a, b = r1.lead, r2.lead
    for k in range(1, min(len(a), len(b))):
        if a[len(a) - k :] == b[:k]:
            yield a[: len(a) - k], b[k:]


def _composition(r1: Rule, r2: Rule, u: tuple, v: tuple) -> NCPoly:
    # (lead1 - tail1) v - u (lead2 - tail2) = u tail2 - tail1 v
    A = r1.tail.alphabet
    return NCPoly.word(A, u) * r2.tail - r1.tail * NCPoly.word(A, v)


def _all_compositions(system: RewriteSystem):
    items = []
    for r1 in system.rules:
        for r2 in system.rules:
            for u, v in _overlaps(r1, r2):
                items.append((_key(r1.lead + v), r1, r2, u, v))
    items.sort(key=lambda t: t[0])
    return items


def _insert(system: RewriteSystem, polys: list, cap: int | None):
    """Add polynomials to the system keeping it monic and interreduced.

    Returns the first lead exceeding the cap, if any (the system is left
    consistent but without that rule).
    """
    pending = list(polys)
    while pending:
        p = reduce(pending.pop(), system)
        if p.is_zero():
            continue
        p = p.monic()
        lead = p.lead()
        if cap is not None and len(lead) > cap:
            return lead, p
        new = Rule(lead, NCPoly.word(p.alphabet, lead) - p)
        keep = []
        for r in system.rules:
            if any(r.lead[i : i + len(lead)] == lead for i in range(len(r.lead) - len(lead) + 1)):
                pending.append(r.as_poly())
            else:
                keep.append(r)
        system.rules = keep + [new]
        system._index()
        # Tails may now contain the new lead.  A tail word is deglex-smaller
        # than its own lead, so it never contains that lead and reducing
        # against the whole system is safe.
        system.rules = [Rule(r.lead, reduce(r.tail, system)) for r in system.rules]
        system._index()
    return None


def complete(
    relations: Sequence[NCPoly],
    degree_cap: int | None = None,
    iter_cap: int = 10000,
    raise_on_cap: bool = False,
) -> RewriteSystem:
    """Complete a set of relations to a reduced Gröbner basis.

    Overlap compositions are processed smallest overlap word first; those
    that reduce to zero are remembered and not retried while both rules are
    unchanged.  If a new rule would exceed ``degree_cap`` (default
    2*max degree + 4), or more than ``iter_cap`` compositions are examined,
    the partial system is returned with ``complete=False`` (or
    :class:`DegreeCapExceeded` is raised when ``raise_on_cap`` is set).
    """
    relations = [r for r in relations if not r.is_zero()]
    if not relations:
        raise ValidationError("relations: need at least one nonzero relation")
    A = relations[0].alphabet
    for r in relations:
        if r.alphabet != A:
            raise ValidationError("relations: alphabet mismatch")
    maxdeg = max(r.degree() for r in relations)
    if degree_cap is None:
        degree_cap = 2 * maxdeg + 4
    if degree_cap < maxdeg:
        raise ValidationError(f"degree_cap: must be >= max relation degree {maxdeg}")
    system = RewriteSystem(A, [], degree_cap, False)

    def capped(lead):
        msg = f"degree_cap: completion produced a rule of degree {len(lead)} > {degree_cap}"
        if raise_on_cap:
            raise DegreeCapExceeded(msg, partial=system)
        return system

    over = _insert(system, list(relations), degree_cap)
    if over is not None:
        return capped(over[0])
    done: set = set()
    examined = 0
    while True:
        progress = False
        for _, r1, r2, u, v in _all_compositions(system):
            key = (r1.key(), r2.key(), u, v)
            if key in done:
                continue
            examined += 1
            if examined > iter_cap:
                if raise_on_cap:
                    raise DegreeCapExceeded(f"iter_cap: more than {iter_cap} compositions", partial=system)
                return system
            s = reduce(_composition(r1, r2, u, v), system)
            if s.is_zero():
                done.add(key)
                continue
            over = _insert(system, [s], degree_cap)
            if over is not None:
                return capped(over[0])
            progress = True
            break
        if not progress:
            system.complete = True
            return system


def diamond_check(system: RewriteSystem) -> bool:
    """True iff every overlap composition of the system reduces to zero."""
    for _, r1, r2, u, v in _all_compositions(system):
        if not reduce(_composition(r1, r2, u, v), system).is_zero():
            return False
    return True


def rewrite_system(alphabet: Alphabet, rules: Sequence[tuple]) -> RewriteSystem:
    """Build a system from ``(lead, tail)`` pairs without completing it."""
    out = []
    for lead, tail in rules:
        w = lead if isinstance(lead, tuple) else alphabet.word(lead)
        if not isinstance(tail, NCPoly):
            tail = NCPoly.constant(alphabet, tail)
        out.append(Rule(w, tail))
    return RewriteSystem(alphabet, out)


# ---------------------------------------------------------------------------
# normal words
# ---------------------------------------------------------------------------


def normal_words(system: RewriteSystem, degree: int, require_complete: bool = True) -> list:
    """Words of the given length containing no rule lead, in increasing deglex order."""
    if require_complete and not system.complete:
        raise ValidationError("system: normal words need a complete rewrite system")
    leads = set(system.leads())
    lengths = sorted({len(l) for l in leads})
    out = []

    def extend(prefix: tuple):
        if len(prefix) == degree:
            out.append(prefix)
            return
        for r in range(system.alphabet.size):
            w = prefix + (r,)
            if any(L <= len(w) and w[len(w) - L :] in leads for L in lengths):
                continue
            extend(w)

    extend(())
    out.sort(key=_key)
    return out


def hilbert_dims(system: RewriteSystem, dmax: int) -> list:
    return [len(normal_words(system, d)) for d in range(dmax + 1)]


# ---------------------------------------------------------------------------
# presets
# ---------------------------------------------------------------------------

PRESETS = ("quantum_plane", "pol_disc", "sl2q", "mat2q", "anick_example")


def _scalars(ctx: QContext | None):
    if ctx is None or ctx.mode == "symbolic":
        K, s = symbolic_field()
        return K(1), s * s, s
    if not ctx.is_exact:
        raise ValidationError("preset_algebra: coefficients must be exact")
    return Fraction(1), ctx.q, ctx.s


def preset_algebra(name: str, ctx: QContext | None = None):
    """Return ``(alphabet, relations)`` for a named relation set.

    The letter ``zs`` of ``pol_disc`` stands for z*.
    """
    one, q, s = _scalars(ctx)
    qi = one / q

    def W(A, text, c=None):
        return NCPoly.word(A, A.word(text), one if c is None else c)

    if name == "quantum_plane":
        A = Alphabet(("t2", "t1"))
        return A, [W(A, "t2*t1") - W(A, "t1*t2", q)]
    if name == "pol_disc":
        A = Alphabet(("zs", "z"))
        return A, [W(A, "zs*z") - W(A, "z*zs", q * q) - NCPoly.constant(A, one - q * q)]
    if name == "anick_example":
        A = Alphabet(("x", "y"))
        return A, [W(A, "x*x") + W(A, "y*y")]
    if name in ("sl2q", "mat2q"):
        letters = ("t11", "t12", "t21", "t22") if name == "sl2q" else ("z11", "z12", "z21", "z22")
        A = Alphabet(letters)
        a, b, c, d = letters
        rels = [
            W(A, f"{a}*{b}") - W(A, f"{b}*{a}", q),
            W(A, f"{a}*{c}") - W(A, f"{c}*{a}", q),
            W(A, f"{b}*{d}") - W(A, f"{d}*{b}", q),
            W(A, f"{c}*{d}") - W(A, f"{d}*{c}", q),
            W(A, f"{b}*{c}") - W(A, f"{c}*{b}"),
            W(A, f"{a}*{d}") - W(A, f"{d}*{a}") - W(A, f"{b}*{c}", q - qi),
        ]
        if name == "sl2q":
            # quantum determinant t11 t22 - q t12 t21 = 1
            rels.append(W(A, f"{a}*{d}") - W(A, f"{b}*{c}", q) - NCPoly.constant(A, one))
        return A, rels
    raise ValidationError(f"preset: unknown preset {name!r}; choose from {', '.join(PRESETS)}")


# ---------------------------------------------------------------------------
# specialization
# ---------------------------------------------------------------------------


def specialize_scalar(c, ctx: QContext):
    """Evaluate a Q(s) element at the context's s."""
    if isinstance(c, (int, Fraction)):
        return ctx.K(c)
    if not hasattr(c, "denom"):
        # already a scalar of a numeric context
        return c
    s = ctx.s

    def ev(poly):
        total = ctx.zero
        for (k,), coef in poly.terms():
            total = total + Fraction(int(coef.numerator), int(coef.denominator)) * s**k
        return total

    den = ev(c.denom)
    if den == 0:
        raise ValidationError(f"specialize: denominator of {c} vanishes at q={ctx.q}")
    return ev(c.numer) / den


def specialize(obj, ctx: QContext):
    """Substitute the context's q into a polynomial or rewrite system."""
    if isinstance(obj, NCPoly):
        return obj.map_coeffs(lambda c: specialize_scalar(c, ctx))
    if isinstance(obj, RewriteSystem):
        rules = [Rule(r.lead, specialize(r.tail, ctx)) for r in obj.rules]
        return RewriteSystem(obj.alphabet, rules, obj.degree_cap, obj.complete)
    raise ValidationError("specialize: expected NCPoly or RewriteSystem")


# ---------------------------------------------------------------------------
# text format
# ---------------------------------------------------------------------------


def _s_poly_text(poly) -> str:
    parts = []
    for (k,), coef in sorted(poly.terms(), key=lambda t: -t[0][0]):
        c = Fraction(int(coef.numerator), int(coef.denominator))
        mono = "" if k == 0 else (f"q^({k}/2)" if k % 2 else (f"q^{k // 2}" if k != 2 else "q"))
        if mono and c == 1:
            parts.append(mono)
        elif mono and c == -1:
            parts.append("-" + mono)
        elif mono:
            parts.append(f"{c}*{mono}")
        else:
            parts.append(str(c))
    text = " + ".join(parts).replace("+ -", "- ")
    return text or "0"


def format_scalar_q(c) -> str:
    """Text for a coefficient as a rational function of q (odd powers of s as q^(k/2))."""
    if isinstance(c, Fraction):
        return str(c)
    if isinstance(c, int):
        return str(c)
    if isinstance(c, Surd) and c.b == 0:
        return str(c.a)
    if isinstance(c, Surd):
        raise ValidationError("format: numeric surd coefficients have no q-literal form")
    num = _s_poly_text(c.numer)
    if c.denom == 1:
        return num
    return f"({num})/({_s_poly_text(c.denom)})"


def format_poly(p: NCPoly) -> str:
    if p.is_zero():
        return "0"
    parts = []
    for w, c in p.sorted_terms():
        word = p.alphabet.show(w) if w else ""
        ctext = format_scalar_q(c)
        neg = ctext.startswith("-") and _atomic(ctext[1:])
        body = ctext[1:] if neg else ctext
        if not _atomic(body):
            body = f"({body})"
        if word:
            body = word if body == "1" else f"{body}*{word}"
        parts.append(("- " if neg else "+ ") + body)
    text = " ".join(parts)
    return text[2:] if text.startswith("+ ") else "-" + text[2:]


def _atomic(text: str) -> bool:
    """True when ``text`` needs no parentheses as a factor."""
    return not any(ch in text for ch in " +-/") or re.fullmatch(r"\d+/\d+", text) is not None


def format_relation_file(alphabet: Alphabet, polys: Sequence[NCPoly]) -> str:
    lines = [f"alphabet: {alphabet}"]
    lines += [format_poly(p) for p in polys]
    return "\n".join(lines) + "\n"


def parse_poly(text: str, alphabet: Alphabet) -> NCPoly:
    """Parse one polynomial line over Q(s) (``q`` and ``q^(1/2)`` allowed in coefficients)."""
    import sympy
    from sympy.parsing.sympy_parser import parse_expr

    K, s_gen = symbolic_field()
    letters = {n: sympy.Symbol(n, commutative=False) for n in alphabet.letters}
    q = sympy.Symbol("q", positive=True)
    spos = sympy.Symbol("s", positive=True)
    local = dict(letters)
    local["q"] = q
    try:
        expr = parse_expr(text.replace("^", "**"), local_dict=local, evaluate=True)
    except Exception as exc:  # sympy raises several unrelated exception types
        raise ValidationError(f"relation: cannot parse {text!r}: {exc}") from None
    expr = sympy.expand(expr)
    free = expr.free_symbols - set(letters.values()) - {q}
    if free:
        raise ValidationError(f"relation: unknown symbols {sorted(map(str, free))} in {text!r}")
    terms: dict = {}
    sym_s = sympy.Symbol("s")
    for term in sympy.Add.make_args(expr):
        comm, nc = term.args_cnc()
        word = []
        for f in nc:
            base, e = f.as_base_exp()
            if base not in letters.values() or not e.is_Integer or e < 1:
                raise ValidationError(f"relation: bad factor {f} in {text!r}")
            word += [str(base)] * int(e)
        coef = sympy.Mul(*comm).subs(q, spos**2).subs(spos, sym_s)
        try:
            c = K.from_expr(sympy.simplify(coef))
        except Exception:
            raise ValidationError(f"relation: coefficient {coef} is not a rational function of q^(1/2)") from None
        w = alphabet.word(word)
        terms[w] = terms.get(w, 0) + c
    return NCPoly(alphabet, terms)


def parse_relation_file(text: str):
    """Parse the relation-file format into ``(alphabet, relations)``."""
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines or not lines[0].startswith("alphabet:"):
        raise ValidationError("relation file: first line must be 'alphabet: a > b > ...'")
    names = [n.strip() for n in lines[0][len("alphabet:") :].split(">")]
    A = Alphabet(tuple(names))
    return A, [parse_poly(ln, A) for ln in lines[1:]]
