"""Command-line interface: ``planejets <command> [options]``.

Exit codes: 0 success, 1 verification mismatch, 2 invalid input,
3 insufficient tree depth or point-count budget.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from .algebra.counting import (
    DEFAULT_BUDGET,
    BudgetExceededError,
    dimension_estimate,
    fiber_point_count,
    fit_power,
)
from .algebra.jets import (
    AtLeast,
    NormalFormError,
    Parametrization,
    characteristic_from_parametrization,
    derivation_identity_holds,
    jet_coefficients,
    jet_derivation,
    newton_form,
    ord_t,
    reduced_fiber_check,
)
from .algebra.parser import ExpressionSyntaxError, parse_curve
from .algebra.polynomial import JetVariable, PlanePolynomial
from .components import classify_components, fiber_codim_closed_form, lct_minimum
from .semigroup import (
    CharacteristicSequence,
    InvalidSemigroupError,
    SemigroupInvariants,
    derive_invariants,
    in_semigroup,
    invariants_from_semigroup,
    parse_semigroup,
)
from .tree import (
    InsufficientDepthError,
    MalformedTreeError,
    TreeInversionError,
    build_tree,
    export_tree,
    invert_tree,
    min_tree_depth,
    tree_from_json,
    tree_shape,
)

EXIT_OK, EXIT_MISMATCH, EXIT_INPUT, EXIT_LIMIT = 0, 1, 2, 3


class InputError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    semigroup: str | None = None
    charseq: str | None = None
    curve: str | None = None
    m: int | None = None
    m_max: int | None = None
    primes: list[int] = field(default_factory=list)
    budget: int = DEFAULT_BUDGET
    format: str = "text"
    output: str | None = None

    def __post_init__(self):
        if self.budget <= 0:
            raise InputError("--budget must be positive")


def _dump_json(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _frac(x: Fraction) -> str:
    return str(x)


# -- input resolution ---------------------------------------------------------


def _invariants(cfg: RunConfig, allow_curve: bool = True) -> SemigroupInvariants:
    given = [k for k in ("semigroup", "charseq", "curve") if getattr(cfg, k)]
    if cfg.curve and cfg.charseq:
        given.remove("curve")
    if len(given) != 1:
        raise InputError("give exactly one of --semigroup, --charseq or --curve")
    if cfg.semigroup:
        return invariants_from_semigroup(parse_semigroup(cfg.semigroup))
    if cfg.charseq:
        return derive_invariants(CharacteristicSequence.parse(cfg.charseq))
    if not allow_curve:
        raise InputError("this command needs --semigroup or --charseq")
    return derive_invariants(_charseq_from_curve(parse_curve(cfg.curve)))


def _charseq_from_curve(f: PlanePolynomial) -> CharacteristicSequence:
    nf = newton_form(f)
    if nf.e1 != 1:
        raise InputError(
            f"curve has e1 = {nf.e1} > 1, so exponents past beta1 = {nf.beta1} are not readable "
            "from the Newton polygon; supply --charseq as well"
        )
    return CharacteristicSequence(nf.beta0, (nf.beta1,))


def _primes(text: str | None) -> list[int]:
    if not text:
        return []
    try:
        return [int(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise InputError(f"bad prime list {text!r}") from None


# -- commands -----------------------------------------------------------------


def cmd_invariants(cfg: RunConfig) -> tuple[str, int]:
    inv = _invariants(cfg)
    cs = inv.charseq
    doc = {
        "charseq": {"beta0": cs.beta0, "betas": list(cs.betas)},
        "semigroup": list(inv.beta_bar),
        "g": inv.g,
        "e": list(inv.e),
        "n": list(inv.n),
        "m": list(inv.m_seq),
        "q0": inv.q0,
        "n1_bbar1": inv.period,
        "lct": _frac(Fraction(1, inv.beta0) + Fraction(1, inv.beta1)),
    }
    if cfg.format == "json":
        return _dump_json(doc), EXIT_OK
    rows = [
        ("characteristic sequence", str(cs)),
        ("semigroup bbar", ",".join(map(str, inv.beta_bar))),
        ("g", str(inv.g)),
        ("e", ",".join(map(str, inv.e))),
        ("n", ",".join(map(str, inv.n))),
        ("m", ",".join(map(str, inv.m_seq))),
        ("q0", str(inv.q0)),
        ("n1*bbar1", str(inv.period)),
        ("lct", doc["lct"]),
    ]
    width = max(len(k) for k, _ in rows)
    return "".join(f"{k:<{width}}  {v}\n" for k, v in rows), EXIT_OK


def _summary_doc(summary) -> dict:
    return {
        "m": summary.m,
        "q": summary.q,
        "N": summary.count,
        "fiber_codim": summary.fiber_codim,
        "fiber_dim": summary.dim,
        "components": [
            {
                "label": str(c.label),
                "kind": c.label.kind.value,
                "kappa": c.label.kappa,
                "j": c.label.j,
                "contact": c.contact,
                "contact_exact": c.contact_exact,
                "codim": c.codim,
                "dim": c.dim,
            }
            for c in summary.components
        ],
    }


def _csv(rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["m", "q", "N", "fiber_codim", "labels"])
    for s in rows:
        writer.writerow([s.m, s.q, s.count, s.fiber_codim, ";".join(str(c.label) for c in s.components)])
    return buf.getvalue()


def cmd_components(cfg: RunConfig) -> tuple[str, int]:
    if cfg.m is None or cfg.m < 1:
        raise InputError("components needs --m >= 1")
    inv = _invariants(cfg)
    s = classify_components(inv, cfg.m)
    if cfg.format == "json":
        return _dump_json(_summary_doc(s)), EXIT_OK
    if cfg.format == "csv":
        return _csv([s]), EXIT_OK
    lines = [f"semigroup {inv}  m={s.m}  q={s.q}  N={s.count}  fiber codim={s.fiber_codim}  dim={s.dim}"]
    for c in s.components:
        contact = f"{c.contact}" if c.contact_exact else f">{c.contact}"
        lines.append(f"  {str(c.label):<16} contact {contact:<6} codim {c.codim:<4} dim {c.dim}")
    return "\n".join(lines) + "\n", EXIT_OK


def cmd_table(cfg: RunConfig) -> tuple[str, int]:
    if cfg.m_max is None or cfg.m_max < 1:
        raise InputError("table needs --m-max >= 1")
    inv = _invariants(cfg)
    rows = [classify_components(inv, m) for m in range(1, cfg.m_max + 1)]
    if cfg.format == "json":
        return _dump_json({"semigroup": list(inv.beta_bar), "rows": [_summary_doc(s) for s in rows]}), EXIT_OK
    if cfg.format == "csv":
        return _csv(rows), EXIT_OK
    lines = [f"{'m':>4} {'q':>3} {'N':>3} {'codim':>5}  labels"]
    for s in rows:
        lines.append(f"{s.m:>4} {s.q:>3} {s.count:>3} {s.fiber_codim:>5}  " + " ".join(str(c.label) for c in s.components))
    return "\n".join(lines) + "\n", EXIT_OK


def cmd_tree(cfg: RunConfig) -> tuple[str, int]:
    inv = _invariants(cfg)
    m_max = cfg.m_max or min_tree_depth(inv)
    tree = build_tree(inv, m_max)
    if cfg.format in ("dot", "json"):
        return export_tree(tree, cfg.format), EXIT_OK
    lines = [f"component tree of {inv} up to m={m_max}: {len(tree.vertices)} vertices, {len(tree.edges)} edges"]
    counts = tree.level_counts()
    for m in sorted(counts):
        labels = " ".join(str(v.label) for v in tree.vertices if v.m == m)
        lines.append(f"  m={m:<4} {labels}")
    return "\n".join(lines) + "\n", EXIT_OK


def cmd_invert_tree(cfg: RunConfig, path: str, b0_datum: int | None) -> tuple[str, int]:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read tree file: {exc}") from None
    tree = tree_from_json(text)
    gens = invert_tree(tree, b0_datum)
    rebuilt = build_tree(invariants_from_semigroup(gens), tree.m_max, with_codims=False)
    ok = tree_shape(rebuilt) == tree_shape(tree)
    result = ",".join(map(str, gens))
    if cfg.format == "json":
        return _dump_json({"semigroup": list(gens), "round_trip": ok}), EXIT_OK if ok else EXIT_MISMATCH
    return f"{result}\nround trip: {'OK' if ok else 'MISMATCH'}\n", EXIT_OK if ok else EXIT_MISMATCH


def cmd_lct(cfg: RunConfig) -> tuple[str, int]:
    inv = _invariants(cfg)
    m_max = cfg.m_max or 2 * inv.period
    value, argmin = lct_minimum(inv, m_max)
    expected = Fraction(1, inv.beta0) + Fraction(1, inv.beta1)
    doc = {"lct": _frac(value), "argmin": argmin, "expected": _frac(expected), "m_max": m_max}
    if cfg.format == "json":
        return _dump_json(doc), EXIT_OK
    return (
        f"min codim/(m+1) over 1..{m_max} = {value} at m = {argmin}\n"
        f"1/beta0 + 1/beta1 = {expected}\n"
    ), EXIT_OK


def _parse_zero(text: str | None) -> list[JetVariable]:
    out = []
    for item in (text or "").replace(" ", "").split(","):
        if not item:
            continue
        try:
            axis, order = item.split(":")
            if axis not in ("x0", "x1"):
                raise ValueError
            out.append(JetVariable(int(axis[1]), int(order)))
        except ValueError:
            raise InputError(f"bad --zero entry {item!r}; expected x0:J or x1:J") from None
    return out


def cmd_jets(cfg: RunConfig, derivation: bool, zero: str | None) -> tuple[str, int]:
    if not cfg.curve:
        raise InputError("jets needs --curve")
    if cfg.m is None or cfg.m < 0:
        raise InputError("jets needs --m >= 0")
    f = parse_curve(cfg.curve)
    if derivation:
        polys = jet_derivation(f, cfg.m)
        name = "f"
    else:
        polys = jet_coefficients(f, cfg.m, _parse_zero(zero))
        name = "F"
    if cfg.format == "json":
        return _dump_json({"curve": str(f), "m": cfg.m, name: [str(p) for p in polys]}), EXIT_OK
    return "".join(f"{name}^({j}) = {p}\n" for j, p in enumerate(polys)), EXIT_OK


def cmd_count_points(cfg: RunConfig, workers: int) -> tuple[str, int]:
    if not cfg.curve:
        raise InputError("count-points needs --curve")
    if cfg.m is None or cfg.m < 0:
        raise InputError("count-points needs --m >= 0")
    if not cfg.primes:
        raise InputError("count-points needs --primes")
    f = parse_curve(cfg.curve)
    est = dimension_estimate(f, cfg.m, cfg.primes, cfg.budget, workers)
    if cfg.format == "json":
        doc = {
            "m": cfg.m,
            "counts": {str(e.p): e.count for e in est.evidence},
            "dim": est.dim,
            "top_components": est.top_components,
            "inconclusive": est.inconclusive,
        }
        return _dump_json(doc), EXIT_OK
    lines = [
        f"p={e.p}: {e.count} points = {e.coefficient}*{e.p}^{e.dim} {'+' if e.residual >= 0 else '-'} {abs(e.residual)}"
        for e in est.evidence
    ]
    flag = "  (inconclusive: primes disagree)" if est.inconclusive else ""
    lines.append(f"estimate: dim {est.dim}, {est.top_components} top-dimensional component(s){flag}")
    return "\n".join(lines) + "\n", EXIT_OK


# -- verify -------------------------------------------------------------------


class _Report:
    def __init__(self):
        self.items: list[dict] = []

    def add(self, check: str, status: str, detail: str):
        self.items.append({"check": check, "status": status, "detail": detail})

    @property
    def failed(self) -> list[dict]:
        return [i for i in self.items if i["status"] == "FAIL"]


def _predicted_evaluations(inv: SemigroupInvariants, m: int, p: int) -> int:
    """Upper estimate of the kernel's prefix evaluations at level ``m``."""
    total = 1
    for d in range(1, m):
        if d < inv.period:
            total += p ** (2 * d - d // inv.beta0 - d // inv.beta1)
        else:
            s = classify_components(inv, d)
            top = sum(1 for c in s.components if c.codim == s.fiber_codim)
            total += top * p ** s.dim
    return total


def cmd_verify(cfg: RunConfig, param: str | None, workers: int) -> tuple[str, int]:
    if not cfg.curve:
        raise InputError("verify needs --curve")
    f = parse_curve(cfg.curve)
    report = _Report()

    try:
        nf = newton_form(f)
    except NormalFormError as exc:
        report.add("normal form", "FAIL", str(exc))
        return _render_verify(cfg, report)
    report.add(
        "normal form",
        "PASS",
        f"beta0={nf.beta0} beta1={nf.beta1} n1={nf.n1} m1={nf.m1} e1={nf.e1} c={nf.c}",
    )

    if cfg.charseq:
        cs = CharacteristicSequence.parse(cfg.charseq)
    else:
        cs = _charseq_from_curve(f)
    inv = derive_invariants(cs)
    ok = (inv.beta0, inv.beta1) == (nf.beta0, nf.beta1)
    report.add(
        "semigroup vs Newton polygon",
        "PASS" if ok else "FAIL",
        f"semigroup {inv}; Newton polygon gives bbar0={nf.beta0}, bbar1={nf.beta1}",
    )
    period = inv.period
    m_max = cfg.m_max or 2 * nf.n1 * nf.beta1

    if param:
        par = Parametrization.parse(param)
        read = characteristic_from_parametrization(par)
        report.add(
            "parametrization exponents",
            "PASS" if read == cs else "FAIL",
            f"read {read} from the parametrization, expected {cs}",
        )
        vanish = ord_t(f, par)
        ok = vanish == math.inf or isinstance(vanish, AtLeast)
        report.add("f on its parametrization", "PASS" if ok else "FAIL", f"ord_t f = {vanish}")
        x, y = PlanePolynomial.x(), PlanePolynomial.y()
        probes = {"x": x, "y": y, "y^n1-c*x^m1": y**nf.n1 - x**nf.m1 * nf.c}
        orders = {}
        for name, h in probes.items():
            o = ord_t(h, par)
            orders[name] = o
            good = isinstance(o, int) and in_semigroup(o, inv.beta_bar)
            report.add(f"ord_t {name}", "PASS" if good else "FAIL", f"{o} {'in' if good else 'not in'} semigroup {inv}")

    bad = derivation_identity_holds(f, 8)
    report.add(
        "derivation identity j!F^(j) = f^(j), j <= 8",
        "PASS" if bad is None else "FAIL",
        "all orders agree" if bad is None else f"differs at j = {bad}",
    )

    for m in range(1, min(m_max, 2 * nf.n1 * nf.beta1) + 1):
        r = reduced_fiber_check(f, m, nf)
        report.add(f"reduced fiber m={m}", "PASS" if r.passed else "FAIL", r.summary())

    for p in cfg.primes:
        if nf.c.numerator % p == 0 or nf.c.denominator % p == 0 or any(
            Fraction(c).denominator % p == 0 for c in f.coeffs.values()
        ):
            report.add(f"point counts p={p}", "SKIP", "bad prime for this curve")
            continue
        for m in range(1, m_max + 1):
            check = f"point count m={m} p={p}"
            need = _predicted_evaluations(inv, m, p)
            if need > cfg.budget:
                report.add(check, "SKIP", f"about {need} evaluations needed, budget {cfg.budget}")
                continue
            try:
                count = fiber_point_count(f, m, p, cfg.budget, workers)
            except BudgetExceededError as exc:
                report.add(check, "SKIP", str(exc))
                continue
            s = classify_components(inv, m)
            if m < period:
                expected = p ** (2 * m - m // nf.beta0 - m // nf.beta1)
                report.add(check, "PASS" if count == expected else "FAIL", f"{count} vs {p}^{2 * m - m // nf.beta0 - m // nf.beta1} = {expected}")
                continue
            top = sum(1 for c in s.components if c.codim == s.fiber_codim)
            fit = fit_power(count, p)
            ok = fit.dim == s.dim and fit.coefficient == top
            report.add(
                check,
                "PASS" if ok else "WARN",
                f"{count} ~ {fit.coefficient}*{p}^{fit.dim}; classifier: {top} top component(s) of dim {s.dim}, N={s.count}",
            )

    try:
        value, argmin = lct_minimum(inv, max(m_max, period - 1))
        report.add("lct minimum", "PASS", f"{value} = 1/{inv.beta0} + 1/{inv.beta1} first at m = {argmin}")
    except AssertionError as exc:
        report.add("lct minimum", "FAIL", f"minimum check failed: {exc}")

    for m in range(1, m_max + 1):
        closed = fiber_codim_closed_form(inv, m)
        s = classify_components(inv, m)
        if closed.value != s.fiber_codim:
            report.add(f"closed-form codim m={m}", "FAIL", f"{closed.value} vs enumerated {s.fiber_codim}")
            break
    else:
        report.add(f"closed-form codim m<={m_max}", "PASS", "case formula matches enumeration")
    return _render_verify(cfg, report)


def _render_verify(cfg: RunConfig, report: _Report) -> tuple[str, int]:
    failed = report.failed
    code = EXIT_MISMATCH if failed else EXIT_OK
    if cfg.format == "json":
        doc = {"passed": not failed, "items": report.items}
        if failed:
            doc["first_failure"] = failed[0]
        return _dump_json(doc), code
    lines = [f"{i['status']:<4}  {i['check']}: {i['detail']}" for i in report.items]
    if failed:
        lines.append(f"FAILED: first counterexample at {failed[0]['check']}: {failed[0]['detail']}")
    else:
        lines.append("all checks passed")
    return "\n".join(lines) + "\n", code


# -- argument parsing ---------------------------------------------------------


def _global_flags(parser: argparse.ArgumentParser, top: bool):
    default = (lambda v: v) if top else (lambda v: argparse.SUPPRESS)
    parser.add_argument("--format", choices=["text", "json", "csv", "dot"], default=default("text"))
    parser.add_argument("--output", "-o", default=default(None), help="write to this file instead of stdout")
    parser.add_argument("--budget", type=int, default=default(DEFAULT_BUDGET), help="max point-count evaluations")


def _input_flags(parser: argparse.ArgumentParser):
    parser.add_argument("--semigroup", help="minimal generators, e.g. 4,6,15")
    parser.add_argument("--charseq", help="characteristic sequence, e.g. '4;6,9'")
    parser.add_argument("--curve", help="polynomial in x, y, e.g. '(y^2-x^3)^2-4*x^6*y-x^9'")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="planejets", description="Jet schemes of plane curve branches.")
    _global_flags(parser, top=True)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text):
        p = sub.add_parser(name, help=help_text)
        _global_flags(p, top=False)
        return p

    p = add("invariants", "semigroup invariants")
    _input_flags(p)
    p = add("components", "irreducible components of one jet fiber")
    _input_flags(p)
    p.add_argument("--m", type=int, required=True)
    p = add("table", "component counts and codimensions for m = 1..m_max")
    _input_flags(p)
    p.add_argument("--m-max", type=int, required=True)
    p = add("tree", "component tree as DOT or JSON")
    _input_flags(p)
    p.add_argument("--m-max", type=int)
    p = add("invert-tree", "recover the semigroup from a tree JSON file")
    p.add_argument("--input", required=True)
    p.add_argument("--b0-datum", type=int, help="largest m with boundary codim 2 (default: read from codims)")
    p = add("lct", "minimum of codim/(m+1)")
    _input_flags(p)
    p.add_argument("--m-max", type=int)
    p = add("jets", "jet equations F^(j) of a curve")
    p.add_argument("--curve", required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--derivation", action="store_true", help="print f^(j) from the derivation instead")
    p.add_argument("--zero", help="variables set to 0, e.g. x0:0,x0:1,x1:0")
    p = add("count-points", "points of the jet fiber over F_p")
    p.add_argument("--curve", required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--primes", required=True)
    p.add_argument("--workers", type=int, default=1)
    p = add("verify", "cross-check the classifier against the algebraic oracles")
    p.add_argument("--curve", required=True)
    p.add_argument("--charseq")
    p.add_argument("--param", help="parametrization, e.g. 't^4, t^6+t^9' or with '@trunc=N'")
    p.add_argument("--m-max", type=int)
    p.add_argument("--primes", default="")
    p.add_argument("--workers", type=int, default=1)
    return parser


def run(argv=None) -> tuple[str, int, str | None]:
    args = build_parser().parse_args(argv)
    cfg = RunConfig(
        command=args.command,
        semigroup=getattr(args, "semigroup", None),
        charseq=getattr(args, "charseq", None),
        curve=getattr(args, "curve", None),
        m=getattr(args, "m", None),
        m_max=getattr(args, "m_max", None),
        primes=_primes(getattr(args, "primes", None)),
        budget=args.budget,
        format=args.format,
        output=args.output,
    )
    if args.command == "invert-tree":
        text, code = cmd_invert_tree(cfg, args.input, args.b0_datum)
    elif args.command == "jets":
        text, code = cmd_jets(cfg, args.derivation, args.zero)
    elif args.command == "count-points":
        text, code = cmd_count_points(cfg, args.workers)
    elif args.command == "verify":
        text, code = cmd_verify(cfg, args.param, args.workers)
    else:
        handler = {
            "invariants": cmd_invariants,
            "components": cmd_components,
            "table": cmd_table,
            "tree": cmd_tree,
            "lct": cmd_lct,
        }[args.command]
        text, code = handler(cfg)
    return text, code, cfg.output


def main(argv=None) -> int:
    try:
        text, code, output = run(argv)
    except InsufficientDepthError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except BudgetExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except (
        InputError,
        InvalidSemigroupError,
        ExpressionSyntaxError,
        NormalFormError,
        MalformedTreeError,
        TreeInversionError,
        ValueError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
