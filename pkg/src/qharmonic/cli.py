"""Command-line front end.

Every command prints one table, either as JSON
(``{command, params, rows, provenance}``) or as CSV.  Exact values print as
``p/q`` strings, integers as integers, floats with ``repr`` precision.
Exit codes: 1 for invalid input, 2 for numerical non-convergence, 3 when a
Gröbner completion hits its degree cap, 4 when ``verify`` finds a failing
criterion.
"""

from __future__ import annotations

import ast
import contextlib
import re
import csv
import io
import json
import math
import operator
import sys
from fractions import Fraction

import click

from .context import QContext, Surd, format_scalar
from .errors import ExactModeUnsupported, QHarmonicError, ValidationError

VERIFY_FAILED = 4

# ---------------------------------------------------------------------------
# configuration and output
# ---------------------------------------------------------------------------


class Config:
    def __init__(self, q, exact, trunc, tol, fmt, seed, out, q_given):
        self.q_text = q
        self.exact = exact
        self.trunc = trunc
        self.tol = tol
        self.format = fmt
        self.seed = seed
        self.out = out
        self.q_given = q_given
        self.ctx = QContext.exact(q, eps=tol) if exact else QContext.floating(_float_q(q), eps=tol)

    def params(self) -> dict:
        return {"q": self.q_text, "mode": "exact" if self.exact else "float", "tol": self.tol}


def _float_q(text: str) -> float:
    try:
        return float(Fraction(text))
    except (ValueError, ZeroDivisionError):
        raise ValidationError(f"q: cannot parse {text!r}") from None


def common_options(fn):
    opts = [
        click.option("--q", "q", default="1/2", show_default=True, help="Deformation parameter, e.g. 1/2 or 0.25."),
        click.option("--exact/--float", "exact", default=True, help="Exact rational arithmetic or floating point."),
        click.option("--trunc", type=int, default=None, help="Term cap for nonterminating series."),
        click.option("--tol", type=float, default=1e-12, show_default=True, help="Series and quadrature tolerance."),
        click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json", show_default=True),
        click.option("--seed", type=int, default=0, show_default=True, help="Seed for randomized checks."),
        click.option("--out", type=click.Path(dir_okay=False, writable=True), default=None, help="Write to FILE."),
    ]
    for opt in reversed(opts):
        fn = opt(fn)
    return fn


_COMMON = ("q", "exact", "trunc", "tol", "fmt", "seed", "out")


def leaf_options(fn):
    """Accept the common options after the subcommand name as well.

    Values given there override the ones given to the group.
    """
    import functools

    opts = [
        click.option("--q", "q", default=None, help="Overrides the group's --q."),
        click.option("--exact/--float", "exact", default=None),
        click.option("--trunc", type=int, default=None),
        click.option("--tol", type=float, default=None),
        click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default=None),
        click.option("--seed", type=int, default=None),
        click.option("--out", type=click.Path(dir_okay=False, writable=True), default=None),
    ]

    @functools.wraps(fn)
    def wrapper(*args, **kw):
        given = {k: kw.pop(k) for k in _COMMON}
        cfg = click.get_current_context().find_object(Config)
        if any(v is not None for v in given.values()):
            merged = {k: (given[k] if given[k] is not None else getattr(cfg, _ATTR[k])) for k in _COMMON}
            q_given = cfg.q_given or given["q"] is not None
            new = Config(**merged, q_given=q_given)
            click.get_current_context().obj = new
            args = (new,) + args[1:] if args and isinstance(args[0], Config) else args
        return fn(*args, **kw)

    for opt in reversed(opts):
        wrapper = opt(wrapper)
    return wrapper


_ATTR = {"q": "q_text", "exact": "exact", "trunc": "trunc", "tol": "tol", "fmt": "format", "seed": "seed", "out": "out"}


def _make_config(q, exact, trunc, tol, fmt, seed, out) -> Config:
    q_given = click.get_current_context().get_parameter_source("q").name != "DEFAULT"
    return Config(q, exact, trunc, tol, fmt, seed, out, q_given)


def _cell(x):
    """Render one value for output."""
    if isinstance(x, Surd) and x.b == 0:
        x = x.a
    if isinstance(x, Fraction) and x.denominator == 1:
        return int(x)
    if hasattr(x, "item") and not isinstance(x, (list, dict)):  # numpy scalar
        x = x.item()
    if isinstance(x, (str, bool, int, list, dict)) or x is None:
        return x
    return format_scalar(x)


def emit(cfg: Config, command: str, params: dict, rows: list, provenance: dict) -> None:
    rows = [{k: _cell(v) for k, v in r.items()} for r in rows]
    if cfg.format == "json":
        payload = {
            "command": command,
            "params": {**cfg.params(), **{k: _cell(v) for k, v in params.items()}},
            "rows": rows,
            "provenance": provenance,
        }
        text = json.dumps(payload, indent=2, ensure_ascii=False) + "\n"
    else:
        header: list = []
        for r in rows:
            for k in r:
                if k not in header:
                    header.append(k)
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        for r in rows:
            writer.writerow([_csv_cell(r.get(k)) for k in header])
        text = buf.getvalue()
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


def _csv_cell(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, dict) and set(v) == {"re", "im"}:
        return f"{v['re']!r}{'+' if v['im'] >= 0 else '-'}{abs(v['im'])!r}j"
    if isinstance(v, (dict, list)):
        return json.dumps(v, separators=(",", ":"))
    return str(v)


# ---------------------------------------------------------------------------
# scalar expressions
# ---------------------------------------------------------------------------

_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul, ast.Div: operator.truediv}


def parse_scalar(text: str, ctx: QContext, name: str = "value"):
    """Evaluate a small arithmetic expression in the numbers and ``q``.

    ``q`` is the context's parameter and ``s`` its square root; ``^`` means
    power.  Exact mode keeps decimals as the rationals they denote.
    """
    text = str(text).strip()
    if text in ("inf", "oo"):
        return math.inf
    try:
        tree = ast.parse(text.replace("^", "**"), mode="eval")
    except SyntaxError:
        raise ValidationError(f"{name}: cannot parse {text!r}") from None

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float, complex)):
            v = node.value
            if ctx.is_exact:
                if isinstance(v, complex):
                    raise ValidationError(f"{name}: complex values need --float")
                return Fraction(ast.get_source_segment(text.replace("^", "**"), node)) if isinstance(v, float) else ctx.K(v)
            return v
        if isinstance(node, ast.Name) and node.id in ("q", "s"):
            return ctx.q if node.id == "q" else ctx.s
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.BinOp) and isinstance(node.op, ast.Pow):
            base, exp = ev(node.left), ev(node.right)
            if base == ctx.q and not (isinstance(exp, (int, Fraction)) and Fraction(exp).denominator == 1):
                return ctx.power(exp)
            if isinstance(exp, Fraction) and exp.denominator == 1:
                exp = int(exp)
            return base**exp
        raise ValidationError(f"{name}: unsupported syntax in {text!r}")

    try:
        return ev(tree)
    except ZeroDivisionError:
        raise ValidationError(f"{name}: division by zero in {text!r}") from None


@contextlib.contextmanager
def _param(name: str):
    """Prefix exact-arithmetic failures with the parameter that caused them."""
    try:
        yield
    except ExactModeUnsupported as exc:
        raise ExactModeUnsupported(f"{name}: {exc}; rerun with --float") from None


def parse_list(text: str, ctx: QContext, name: str) -> list:
    if text is None or not str(text).strip():
        return []
    return [parse_scalar(t, ctx, name) for t in str(text).split(",")]


def parse_int(value, name: str) -> int:
    try:
        return int(value)
    except (TypeError, ValueError):
        raise ValidationError(f"{name}: expected an integer, got {value!r}") from None


_ZSTAR = re.compile(r"(?<![A-Za-z0-9_])z\*(?=\s*(?:$|[)+\-^]))")


def parse_element(text: str, ctx: QContext):
    """A polynomial in z, zs (z*) with coefficients in q."""
    from .ncgroebner import Alphabet, parse_poly, specialize
    from .qdisc.element import pol_normal_form

    A = Alphabet(("zs", "z"))
    # "z*" is read as the letter zs only where it cannot be a product sign
    poly = parse_poly(_ZSTAR.sub("zs", text), A)
    if not ctx.is_exact:
        raise ValidationError("expr: element arithmetic needs --exact")
    return pol_normal_form(specialize(poly, ctx), ctx)


def element_rows(f, **extra) -> list:
    rows = []
    for (a, b), c in sorted(f.decompose().items()):
        rows.append({**extra, "z_power": a, "zs_power": b, "coefficient": c})
    return rows


# ---------------------------------------------------------------------------
# root
# ---------------------------------------------------------------------------


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
def cli():
    """q-special functions, Gröbner bases and harmonic analysis on the quantum disc."""


# ---------------------------------------------------------------------------
# qseries
# ---------------------------------------------------------------------------

_QSERIES_SRC = "q-series definitions"


@cli.group()
@common_options
@click.pass_context
def qseries(ctx, **kw):
    """q-Pochhammer symbols, q-Gamma, basic hypergeometric series."""
    ctx.obj = _make_config(**kw)


@qseries.command("poch")
@leaf_options
@click.option("--a", required=True)
@click.option("--n", required=True, help="Integer, 'inf', or a real index.")
@click.option("--base", default="q", show_default=True)
@click.pass_obj
def qs_poch(cfg, a, n, base):
    from .qseries import q_pochhammer

    c = cfg.ctx
    nn = parse_scalar(n, c, "n")
    if isinstance(nn, Fraction) and nn.denominator == 1:
        nn = int(nn)
    value = q_pochhammer(parse_scalar(a, c, "a"), parse_scalar(base, c, "base"), nn, c)
    emit(cfg, "qseries poch", {"a": a, "n": n, "base": base}, [{"value": value, "source": "q-Pochhammer symbol"}], {"value": _QSERIES_SRC})


@qseries.command("gamma")
@leaf_options
@click.option("--x", required=True)
@click.option("--base", default=None, help="Defaults to q.")
@click.pass_obj
def qs_gamma(cfg, x, base):
    from .qseries import q_gamma

    c = cfg.ctx
    b = parse_scalar(base, c, "base") if base else None
    value = q_gamma(parse_scalar(x, c, "x"), c, base=b)
    emit(cfg, "qseries gamma", {"x": x, "base": base or "q"}, [{"x": parse_scalar(x, c, "x"), "value": value, "source": "q-Gamma function"}], {"value": _QSERIES_SRC})


@qseries.command("beta")
@leaf_options
@click.option("--x", required=True)
@click.option("--y", required=True)
@click.pass_obj
def qs_beta(cfg, x, y):
    from .qseries import q_beta

    c = cfg.ctx
    value = q_beta(parse_scalar(x, c, "x"), parse_scalar(y, c, "y"), c)
    emit(cfg, "qseries beta", {"x": x, "y": y}, [{"value": value, "source": "q-Beta function"}], {"value": _QSERIES_SRC})


@qseries.command("binomial")
@leaf_options
@click.option("--n", type=int, required=True)
@click.option("--k", type=int, required=True)
@click.pass_obj
def qs_binomial(cfg, n, k):
    from .qseries import gauss_binomial, gauss_binomial_value

    poly = gauss_binomial(n, k)
    value = gauss_binomial_value(n, k, cfg.ctx.q)
    row = {"n": n, "k": k, "polynomial": str(poly.as_expr()), "value": value, "source": "Gaussian binomial"}
    emit(cfg, "qseries binomial", {"n": n, "k": k}, [row], {"value": _QSERIES_SRC})


@qseries.command("hyper")
@leaf_options
@click.option("--upper", required=True, help="Comma-separated upper parameters.")
@click.option("--lower", default="", help="Comma-separated lower parameters.")
@click.option("--arg", "arg", required=True)
@click.option("--base", default="q", show_default=True)
@click.pass_obj
def qs_hyper(cfg, upper, lower, arg, base):
    from .qseries import HyperSpec, basic_hyper

    c = cfg.ctx
    spec = HyperSpec(
        tuple(parse_list(upper, c, "upper")), tuple(parse_list(lower, c, "lower")), parse_scalar(base, c, "base"), parse_scalar(arg, c, "arg")
    )
    value, bound = basic_hyper(spec, trunc=cfg.trunc, ctx=c, return_bound=True)
    row = {"value": value, "tail_bound": float(bound), "source": "basic hypergeometric series"}
    emit(cfg, "qseries hyper", {"upper": upper, "lower": lower, "arg": arg, "base": base}, [row], {"value": _QSERIES_SRC})


@qseries.command("qexp")
@leaf_options
@click.option("--z", required=True)
@click.option("--kind", type=click.Choice(["small_e", "big_E"]), default="small_e", show_default=True)
@click.pass_obj
def qs_qexp(cfg, z, kind):
    from .qseries import q_exp

    c = cfg.ctx
    value = q_exp(parse_scalar(z, c, "z"), kind, c)
    emit(cfg, "qseries qexp", {"z": z, "kind": kind}, [{"value": value, "source": f"q-exponential {kind}"}], {"value": _QSERIES_SRC})


# ---------------------------------------------------------------------------
# orth
# ---------------------------------------------------------------------------

_ORTH_SRC = "basic hypergeometric representation and three-term recurrence of the family"


def _family(family: str, params: str, cfg: Config):
    from .qorth import FamilySpec

    vals = parse_list(params, cfg.ctx, "params")
    if family == "q_hahn" and vals:
        N = vals[-1]
        if not (isinstance(N, int) or (isinstance(N, (Fraction, float)) and float(N).is_integer())):
            raise ValidationError(f"params: q_hahn needs an integer N, got {N}")
        vals[-1] = int(N)
    spec = FamilySpec(family, tuple(vals))
    spec.validate(cfg.ctx)
    return spec


_FAMILY = click.Choice(["askey_wilson", "al_salam_chihara", "cont_dual_q_hahn", "little_q_jacobi", "q_hahn"])


@cli.group()
@common_options
@click.pass_context
def orth(ctx, **kw):
    """q-orthogonal polynomial families."""
    ctx.obj = _make_config(**kw)


@orth.command("eval")
@leaf_options
@click.option("--family", type=_FAMILY, required=True)
@click.option("--params", required=True, help="Comma-separated family parameters.")
@click.option("--n", type=int, required=True)
@click.option("--x", required=True, help="Evaluation point (q-Hahn: the point q^-x itself).")
@click.option("--method", type=click.Choice(["explicit", "recurrence"]), default="explicit", show_default=True)
@click.pass_obj
def orth_eval_cmd(cfg, family, params, n, x, method):
    from .qorth import orth_eval

    spec = _family(family, params, cfg)
    value = orth_eval(spec, n, parse_scalar(x, cfg.ctx, "x"), method, cfg.ctx)
    emit(cfg, "orth eval", {"family": family, "params": params, "n": n, "x": x, "method": method},
         [{"n": n, "value": value, "source": f"{family} polynomial"}], {"value": _ORTH_SRC})


@orth.command("weight")
@leaf_options
@click.option("--family", type=_FAMILY, required=True)
@click.option("--params", required=True)
@click.option("--point", required=True, help="x in [-1, 1] or an integer grid index.")
@click.pass_obj
def orth_weight_cmd(cfg, family, params, point):
    from .qorth import orth_weight

    spec = _family(family, params, cfg)
    p = parse_scalar(point, cfg.ctx, "point")
    if isinstance(p, Fraction) and p.denominator == 1:
        p = int(p)
    value = orth_weight(spec, p, cfg.ctx)
    emit(cfg, "orth weight", {"family": family, "params": params, "point": point},
         [{"point": p, "weight": value, "source": f"{family} orthogonality weight"}], {"weight": "orthogonality measure of the family"})


@orth.command("gram")
@leaf_options
@click.option("--family", type=_FAMILY, required=True)
@click.option("--params", required=True)
@click.option("--max-degree", type=int, default=4, show_default=True)
@click.pass_obj
def orth_gram_cmd(cfg, family, params, max_degree):
    from .qorth import orth_gram, orth_norm

    spec = _family(family, params, cfg)
    rows = []
    for m in range(max_degree + 1):
        for n in range(max_degree + 1):
            rows.append({
                "m": m,
                "n": n,
                "gram": orth_gram(spec, m, n, cfg.ctx),
                "expected": orth_norm(spec, n, cfg.ctx) if m == n else 0,
                "source": f"{family} orthogonality relation",
            })
    emit(cfg, "orth gram", {"family": family, "params": params, "max_degree": max_degree}, rows,
         {"gram": "quadrature or exact sum against the weight", "expected": "closed-form squared norm"})


# ---------------------------------------------------------------------------
# groebner
# ---------------------------------------------------------------------------


@cli.command()
@common_options
@click.option("--preset", type=click.Choice(["quantum_plane", "pol_disc", "anick_example", "sl2q", "mat2q"]), default=None)
@click.option("--relations", "relations_file", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--dims", type=int, default=None, help="Also list normal-word counts up to this degree.")
@click.option("--normal-words", type=int, default=None, help="Also list the normal words of this degree.")
@click.option("--degree-cap", type=int, default=None)
@click.option("--iter-cap", type=int, default=10000, show_default=True)
@click.option("--emit-relations", type=click.Path(dir_okay=False, writable=True), default=None,
              help="Write the input relations in relation-file format.")
def groebner(q, exact, trunc, tol, fmt, seed, out, preset, relations_file, dims, normal_words, degree_cap, iter_cap, emit_relations):
    """Complete a relation set to a reduced Gröbner basis (deglex order).

    Without an explicit --q the coefficients stay rational functions of q.
    """
    from .ncgroebner import complete, format_relation_file, hilbert_dims, normal_words as nwords
    from .ncgroebner import parse_relation_file, preset_algebra, specialize

    cfg = _make_config(q, exact, trunc, tol, fmt, seed, out)
    if (preset is None) == (relations_file is None):
        raise ValidationError("preset: give exactly one of --preset or --relations")
    if preset:
        A, rels = preset_algebra(preset)
    else:
        with open(relations_file, encoding="utf-8") as fh:
            A, rels = parse_relation_file(fh.read())
    if emit_relations:
        with open(emit_relations, "w", encoding="utf-8") as fh:
            fh.write(format_relation_file(A, rels))
    if cfg.q_given:
        if not cfg.exact:
            raise ValidationError("q: Gröbner completion needs exact coefficients; drop --float")
        rels = [specialize(r, cfg.ctx) for r in rels]
    G = complete(rels, degree_cap=degree_cap, iter_cap=iter_cap)
    rows = [{"kind": "rule", "lead": r["lead"], "tail": r["tail"]} for r in G.describe()]
    if dims is not None and G.complete:
        rows += [{"kind": "dimension", "degree": d, "count": c} for d, c in enumerate(hilbert_dims(G, dims))]
    if normal_words is not None and G.complete:
        rows += [{"kind": "normal_word", "degree": normal_words, "word": A.show(w) or "1"} for w in nwords(G, normal_words)]
    params = {"preset": preset or relations_file, "alphabet": " > ".join(A.letters), "complete": G.complete,
              "degree_cap": G.degree_cap, "q_specialized": cfg.q_given}
    emit(cfg, "groebner", params, rows,
         {"rule": "reduced Gröbner basis by overlap completion, deglex order",
          "dimension": "number of normal words of each degree"})
    if not G.complete:
        click.echo("error: degree cap reached; the listed rules are a partial basis", err=True)
        raise SystemExit(3)


# ---------------------------------------------------------------------------
# disc
# ---------------------------------------------------------------------------

_RADIAL_SRC = "radial part of the invariant Laplacian on the grid x_j = q^(-2j)"


@cli.group()
@common_options
@click.pass_context
def disc(ctx, **kw):
    """Quantum disc: elements, Laplacian, spectral theory."""
    ctx.obj = _make_config(**kw)


@disc.command("lambda")
@leaf_options
@click.option("--l", "l", required=True)
@click.pass_obj
def disc_lambda(cfg, l):
    from .qdisc.radial import lambda_of

    lv = parse_scalar(l, cfg.ctx, "l")
    with _param("l"):
        value = lambda_of(lv, cfg.ctx)
    emit(cfg, "disc lambda", {"l": l}, [{"l": lv, "lambda": value, "source": "eigenvalue of the radial Laplacian"}],
         {"lambda": "(1 - q^(-2l))(1 - q^(2l+2)) / (1 - q^2)^2"})


@disc.command("eigenvalues")
@leaf_options
@click.option("--N", "N", type=int, default=400, show_default=True)
@click.pass_obj
def disc_eigenvalues(cfg, N):
    from .qdisc.radial import laplacian_radial_eigenvalues

    ev = laplacian_radial_eigenvalues(N, cfg.ctx)
    rows = [{"index": i, "eigenvalue": float(v), "source": "truncated Jacobi matrix"} for i, v in enumerate(ev)]
    emit(cfg, "disc eigenvalues", {"N": N}, rows, {"eigenvalue": _RADIAL_SRC})


@disc.command("phi")
@leaf_options
@click.option("--l", "l", required=True)
@click.option("--N", "N", type=int, default=10, show_default=True)
@click.option("--method", type=click.Choice(["series", "recurrence"]), default="series", show_default=True)
@click.pass_obj
def disc_phi(cfg, l, N, method):
    from .qdisc.radial import phi_l_grid

    lv = parse_scalar(l, cfg.ctx, "l")
    with _param("l"):
        vals = phi_l_grid(lv, N, cfg.ctx, method)
    rows = [{"j": j, "value": v, "source": "radial eigenfunction"} for j, v in enumerate(vals)]
    emit(cfg, "disc phi", {"l": l, "N": N, "method": method}, rows, {"value": "terminating 3phi2 representation"})


@disc.command("density")
@leaf_options
@click.option("--points", type=int, default=50, show_default=True)
@click.option("--normalization", type=click.Choice(["unitary", "printed"]), default="unitary", show_default=True)
@click.pass_obj
def disc_density(cfg, points, normalization):
    from .qdisc.radial import rho_max, sigma_density

    hi = rho_max(cfg.ctx.to_float_context())
    rows = []
    for i in range(points):
        r = hi * i / (points - 1)
        rows.append({"rho": r, "density": sigma_density(r, cfg.ctx, normalization), "source": "Plancherel density"})
    emit(cfg, "disc density", {"points": points, "normalization": normalization}, rows,
         {"density": "1/(c(l) c(-1-l)) on l = -1/2 + i rho"})


@disc.command("green")
@leaf_options
@click.option("--M", "M", type=int, default=60, show_default=True)
@click.option("--N", "N", type=int, default=21, show_default=True)
@click.pass_obj
def disc_green(cfg, M, N):
    from .qdisc.radial import green_f0

    rows = [{"j": j, "value": v, "source": "Green function series"} for j, v in enumerate(green_f0(M, N, cfg.ctx))]
    emit(cfg, "disc green", {"M": M, "N": N}, rows, {"value": "(1 - q^2) sum_m (q^-2 - 1)/(q^-2m - 1) x^-m"})


@disc.command("cfunction")
@leaf_options
@click.option("--l", "l", required=True)
@click.pass_obj
def disc_cfunction(cfg, l):
    from .qdisc.radial import c_function, c_function_2phi1

    lv = parse_scalar(l, cfg.ctx.to_float_context(), "l")
    row = {"l": lv, "c": c_function(lv, cfg.ctx), "c_2phi1": c_function_2phi1(lv, cfg.ctx), "source": "c-function"}
    emit(cfg, "disc cfunction", {"l": l}, [row], {"c": "q^2-Gamma quotient", "c_2phi1": "2phi1 summation route"})


@disc.command("intertwining")
@leaf_options
@click.option("--l", "l", required=True)
@click.option("--n", "n", type=int, required=True)
@click.pass_obj
def disc_intertwining(cfg, l, n):
    from .qdisc.radial import intertwining_a

    lv = parse_scalar(l, cfg.ctx, "l")
    with _param("l"):
        value = intertwining_a(lv, n, cfg.ctx)
    emit(cfg, "disc intertwining", {"l": l, "n": n}, [{"l": lv, "n": n, "a": value, "source": "intertwining eigenvalue"}],
         {"a": "product of q-number quotients"})


@disc.command("fourier")
@leaf_options
@click.option("--values", required=True, help="Grid values f(x_0), f(x_1), ...")
@click.option("--rho", default=None, help="Comma-separated rho values; omit for the round trip.")
@click.pass_obj
def disc_fourier(cfg, values, rho):
    from .qdisc.radial import fourier_radial, parseval_norms

    fctx = cfg.ctx.to_float_context()
    vals = [float(v) for v in parse_list(values, cfg.ctx, "values")]
    if rho:
        rs = [float(r) for r in parse_list(rho, fctx, "rho")]
        out = fourier_radial(vals, rs, "forward", fctx)
        rows = [{"rho": r, "transform": float(v), "source": "radial Fourier transform"} for r, v in zip(rs, out)]
    else:
        back = fourier_radial(vals, direction="inverse", ctx=fctx, N=len(vals), tol=min(cfg.tol * 100, 1e-8))
        a, b = parseval_norms(vals, fctx)
        rows = [{"j": j, "value": float(v), "recovered": float(w), "source": "Plancherel round trip"} for j, (v, w) in enumerate(zip(vals, back))]
        rows.append({"grid_norm_sq": a, "spectral_norm_sq": b, "source": "Parseval identity"})
    emit(cfg, "disc fourier", {"values": values, "rho": rho}, rows,
         {"transform": "sum_j f(x_j) Phi(x_j) x_j (q^-2 - 1)", "recovered": "inverse transform against the Plancherel density"})


@disc.command("laplacian")
@leaf_options
@click.option("--values", required=True, help="Grid values; taken as zero beyond the list.")
@click.pass_obj
def disc_laplacian(cfg, values):
    from .qdisc.radial import laplacian_radial_apply

    vals = parse_list(values, cfg.ctx, "values") + [cfg.ctx.zero]
    rows = [{"j": j, "value": v, "source": "radial Laplacian"} for j, v in enumerate(laplacian_radial_apply(vals, cfg.ctx))]
    emit(cfg, "disc laplacian", {"values": values}, rows, {"value": _RADIAL_SRC})


@disc.command("element")
@leaf_options
@click.option("--expr", required=True, help="Polynomial in z and zs (z*), e.g. 'zs*z - q^2*z*zs'.")
@click.option("--laplacian", is_flag=True, help="Apply the invariant Laplacian.")
@click.pass_obj
def disc_element(cfg, expr, laplacian):
    from .qdisc.element import laplacian_apply

    f = parse_element(expr, cfg.ctx)
    if laplacian:
        f = laplacian_apply(f)
    rows = element_rows(f, source="canonical basis z^a z*^b")
    emit(cfg, "disc element", {"expr": expr, "laplacian": laplacian}, rows, {"coefficient": "normal form via z* z = q^2 z z* + 1 - q^2"})


@disc.command("fock")
@leaf_options
@click.option("--expr", required=True)
@click.option("--N", "N", type=int, default=6, show_default=True)
@click.pass_obj
def disc_fock(cfg, expr, N):
    from .qdisc.element import fock_matrix

    M = fock_matrix(parse_element(expr, cfg.ctx), N, basis="monomial")
    rows = [{"row": i, "col": j, "value": M[i, j], "source": "Fock representation"} for i in range(N) for j in range(N) if M[i, j] != 0]
    emit(cfg, "disc fock", {"expr": expr, "N": N}, rows, {"value": "matrix in the basis z^n e_0"})


# ---------------------------------------------------------------------------
# bergman
# ---------------------------------------------------------------------------


@cli.group()
@common_options
@click.pass_context
def bergman(ctx, **kw):
    """Weighted Bergman spaces, Toeplitz operators, Berezin transform."""
    ctx.obj = _make_config(**kw)


def _lam(text: str, cfg: Config):
    lv = parse_scalar(text, cfg.ctx, "lam")
    if cfg.ctx.is_exact and Fraction(lv).denominator > 2:
        raise ExactModeUnsupported(f"lam: q^(2 lam) is exact only for half-integer lam, got {text}; rerun with --float")
    return lv


@bergman.command("norms")
@leaf_options
@click.option("--lam", required=True)
@click.option("--N", "N", type=int, default=6, show_default=True)
@click.pass_obj
def b_norms(cfg, lam, N):
    from .bergman import bergman_kernel_coeff, monomial_norm

    lv = _lam(lam, cfg)
    rows = [{"n": n, "norm_sq": monomial_norm(n, lv, cfg.ctx), "kernel_coeff": bergman_kernel_coeff(n, lv, cfg.ctx),
             "source": "weighted Bergman space"} for n in range(N)]
    emit(cfg, "bergman norms", {"lambda": lam, "N": N}, rows,
         {"norm_sq": "(q^2; q^2)_n / (q^(2 lambda); q^2)_n", "kernel_coeff": "reciprocal of norm_sq"})


@bergman.command("toeplitz")
@leaf_options
@click.option("--symbol", required=True, help="z, z_star, y^k")
@click.option("--lam", required=True)
@click.option("--N", "N", type=int, default=6, show_default=True)
@click.pass_obj
def b_toeplitz(cfg, symbol, lam, N):
    from .bergman import toeplitz_matrix

    sym = symbol
    if symbol.startswith("y^"):
        sym = ("y_power", parse_int(symbol[2:], "symbol"))
    elif symbol == "y":
        sym = ("y_power", 1)
    M = toeplitz_matrix(sym, _lam(lam, cfg), N, cfg.ctx)
    rows = [{"row": i, "col": j, "value": M[i, j], "source": "Toeplitz operator"} for i in range(N) for j in range(N) if M[i, j] != 0]
    emit(cfg, "bergman toeplitz", {"symbol": symbol, "lambda": lam, "N": N}, rows, {"value": "matrix in the monomial basis z^n"})


@bergman.command("berezin")
@leaf_options
@click.option("--lam", required=True)
@click.option("--values", required=True)
@click.option("--N", "N", type=int, default=10, show_default=True)
@click.option("--product-formula", is_flag=True, help="Use the infinite product of resolvents instead.")
@click.option("--M", "M", type=int, default=40, show_default=True)
@click.pass_obj
def b_berezin(cfg, lam, values, N, product_formula, M):
    from .bergman import berezin_product_formula, berezin_radial

    fctx = cfg.ctx.to_float_context()
    lv = float(_lam(lam, cfg))
    vals = [float(v) for v in parse_list(values, cfg.ctx, "values")]
    params = {"lambda": lam, "values": values, "N": N}
    if product_formula:
        out = berezin_product_formula(vals, lv, M=M, ctx=fctx)[:N]
        params["factors"] = M
        src = {"value": "product of resolvents of the radial Laplacian"}
    else:
        out, J, tail = berezin_radial(vals, lv, ctx=fctx, N=N)
        params.update({"terms": J, "tail_bound": tail})
        src = {"value": "(1 - t) sum_j t^j p_j(L) f with t = q^(2(lambda-1))"}
    rows = [{"j": j, "value": float(v), "source": "Berezin transform"} for j, v in enumerate(out)]
    emit(cfg, "bergman berezin", params, rows, src)


@bergman.command("pj")
@leaf_options
@click.option("--j", "j", type=int, required=True)
@click.pass_obj
def b_pj(cfg, j):
    from .bergman import p_poly

    rows = [{"power": k, "coefficient": c, "source": "p_j polynomial"} for k, c in enumerate(p_poly(j, cfg.ctx))]
    emit(cfg, "bergman pj", {"j": j}, rows, {"coefficient": "terminating 3phi2 form of p_j"})


# ---------------------------------------------------------------------------
# star
# ---------------------------------------------------------------------------


@cli.command()
@common_options
@click.option("--f", "f_expr", required=True, help="Left factor, polynomial in z, zs.")
@click.option("--g", "g_expr", required=True, help="Right factor.")
@click.option("--K", "K", type=int, default=3, show_default=True, help="Highest power of t.")
def star(q, exact, trunc, tol, fmt, seed, out, f_expr, g_expr, K):
    """Berezin star product f *_t g up to t^K."""
    from .bergman import star_product

    cfg = _make_config(q, exact, trunc, tol, fmt, seed, out)
    f, g = parse_element(f_expr, cfg.ctx), parse_element(g_expr, cfg.ctx)
    series = star_product(f, g, K)
    rows = []
    for k, c in enumerate(series):
        rows += element_rows(c, power=k, source="star product coefficient")
    emit(cfg, "star", {"f": f_expr, "g": g_expr, "K": K}, rows,
         {"coefficient": "(1 - t) sum_j t^j f1 p_j(box)(f2 g1) g2 expanded in t"})


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------


@cli.command()
@common_options
@click.option("--suite", "suites", type=click.IntRange(1, 11), multiple=True, help="Criterion number(s); default all.")
def verify(q, exact, trunc, tol, fmt, seed, out, suites):
    """Run the acceptance suites and report each check."""
    from .verify import SUITES, run_suite

    cfg = _make_config(q, exact, trunc, tol, fmt, seed, out)
    rows = []
    all_ok = True
    for n in suites or sorted(SUITES):
        title, checks, ok = run_suite(n, cfg.seed)
        all_ok &= ok
        for c in checks:
            rows.append({"criterion": n, "suite": title, **c.to_json()})
    emit(cfg, "verify", {"suites": list(suites) or "all", "seed": cfg.seed}, rows,
         {"passed": "independent oracle or closed form for each check"})
    if not all_ok:
        raise SystemExit(VERIFY_FAILED)


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def main(argv=None) -> int:
    try:
        cli.main(args=argv, prog_name="qharmonic", standalone_mode=False)
    except QHarmonicError as exc:
        click.echo(f"error: {exc}", err=True)
        return exc.exit_code
    except NotImplementedError as exc:
        click.echo(f"error: {exc}", err=True)
        return 1
    except click.exceptions.Abort:
        return 1
    except click.ClickException as exc:
        exc.show()
        return 1
    except SystemExit as exc:
        return int(exc.code or 0)
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
