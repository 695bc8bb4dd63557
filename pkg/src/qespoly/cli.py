"""Command-line front end.

Exit codes: 0 success, 1 invalid input, 2 a check performed by the command
failed (invariance violated, relation does not hold, closed form differs,
levels unmatched).  Numeric parameters are exact rational strings; only
``--tol`` accepts a float.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import os
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources

import jsonschema

from . import cases as cs
from . import catalog as cat
from . import hamiltonians as ham
from . import recurrence as rec
from .exactnum import as_rational, format_scalar, real_roots, root_values
from .numverify.compare import compare
from .numverify.fd import harmonic_problem, solve_spectrum
from .numverify.systems import rational_polynomial, verify_case
from .spaces import FOperator, MonomialSpace, check_invariance, format_entry, restrict
from .weylop import DiffOperator, MatrixOperator

EXIT_OK, EXIT_INVALID, EXIT_FINDING = 0, 1, 2
CASE_PARAMS = ("m", "p2", "p1", "kappa0", "delta", "k2", "alpha", "M", "bosons")


class InputError(ValueError):
    """Invalid user input; maps to exit code 1."""


class Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def rational_arg(text: str) -> Fraction:
    try:
        return as_rational(text)
    except (TypeError, ValueError) as exc:
        raise argparse.ArgumentTypeError(f"not an exact rational: {text!r}") from exc


def rational_list_arg(text: str) -> list[Fraction]:
    return [rational_arg(t.strip()) for t in text.split(",")]


@dataclass
class Outcome:
    payload: dict
    text: str
    status: int = EXIT_OK
    csv_header: list[str] | None = None
    csv_rows: list[list] = field(default_factory=list)


# ---------------------------------------------------------------------------
# helpers

def _op_json(op):
    if isinstance(op, DiffOperator):
        return op.term_list()
    if isinstance(op, MatrixOperator):
        return op.as_dict()
    if isinstance(op, FOperator):
        return op.format()
    raise TypeError(type(op))


def _op_text(op) -> str:
    return op.format() if hasattr(op, "format") else str(op)


def _param_sets(args, single: bool) -> list[dict]:
    lists = {k: getattr(args, k) for k in CASE_PARAMS if getattr(args, k) is not None}
    keys = sorted(lists)
    combos = [dict(zip(keys, vals)) for vals in itertools.product(*(lists[k] for k in keys))]
    combos = combos or [{}]
    if single and len(combos) > 1:
        raise InputError("this command takes single parameter values, not lists")
    return combos


def _params(case: str, values: dict):
    try:
        return cs.make_params(case, values)
    except (cs.CaseError, ValueError) as exc:
        raise InputError(str(exc)) from exc


def _workers() -> int:
    raw = os.environ.get("QES_WORKERS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise InputError(f"QES_WORKERS must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise InputError("QES_WORKERS must be a positive integer")
    return n


def _pool_map(fn, tasks: list) -> list:
    workers = _workers()
    if workers == 1 or len(tasks) < 2:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, tasks))


# ---------------------------------------------------------------------------
# operator-level commands

_OP_RE = re.compile(r"^(?P<fam>[A-Za-z_]+?)(?P<eps>[+0-])?(?::(?P<idx>\d+))?$")


def _spec_from_args(args, family: str, eps: str = "+", idx: int | None = None) -> cat.CatalogSpec:
    kw = dict(n=args.n, m=args.m, a=args.a, lam=args.lam, eps=eps)
    if family in ("q_low", "q_bar", "Q", "Qbar"):
        kw["alpha"] = idx or 0
    if family in ("S", "Stilde"):
        kw["index"] = idx or 1
    return cat.CatalogSpec(family, **kw)


def parse_op_name(text: str) -> tuple[str, str, int | None]:
    """``J+`` -> (J, +, None); ``Q:1`` -> (Q, +, 1); ``S:2`` -> (S, +, 2)."""
    mt = _OP_RE.match(text)
    if not mt or mt.group("fam") not in cat.FAMILIES:
        raise InputError(f"unknown operator {text!r}; families are {', '.join(cat.FAMILIES)}")
    idx = mt.group("idx")
    return mt.group("fam"), mt.group("eps") or "+", None if idx is None else int(idx)


def cmd_catalog(args) -> Outcome:
    family = args.family or args.family_opt
    if args.action == "list":
        if family is not None:
            raise InputError("catalog list takes no family; use catalog show FAMILY")
        return _catalog_list(args)
    if family is None:
        raise InputError("catalog show needs a family")
    if family not in cat.FAMILIES:
        raise InputError(f"unknown family {family!r}; families are {', '.join(cat.FAMILIES)}")
    args.family = family
    specs = cat.family_specs(args.family, args.n, args.m, args.a, args.lam)
    ops, lines = [], []
    for spec in specs:
        try:
            op = cat.build(spec)
        except (cat.DomainError, ValueError) as exc:
            raise InputError(str(exc)) from exc
        name = _spec_name(spec)
        space = cat.declared_space(spec)
        ops.append({"name": name, "operator": _op_json(op),
                    "space": None if space is None else space.labels()})
        lines.append(f"{name} = {_op_text(op)}")
    payload = {"command": "catalog", "action": "show", "family": args.family,
               "params": _op_params(args), "operators": ops}
    return Outcome(payload, "\n".join(lines))


def _catalog_list(args) -> Outcome:
    fams, lines = [], []
    for fam in cat.FAMILIES:
        try:
            names = [_spec_name(s) for s in cat.family_specs(fam, args.n, args.m, args.a, args.lam)]
        except (cat.DomainError, ValueError):
            names = []
        fams.append({"family": fam, "operators": names})
        lines.append(f"{fam}: {' '.join(names) if names else '(outside its domain here)'}")
    return Outcome({"command": "catalog", "action": "list", "families": fams}, "\n".join(lines))


def _spec_name(spec: cat.CatalogSpec) -> str:
    if spec.family in ("j", "k_a", "J"):
        return f"{spec.family}{spec.eps}"
    if spec.family in ("q_low", "q_bar", "Q", "Qbar"):
        return f"{spec.family}:{spec.alpha}"
    if spec.family in ("S", "Stilde"):
        return f"{spec.family}:{spec.index}"
    return spec.family


def _op_params(args) -> dict:
    return {"n": args.n, "m": args.m, "a": "formal" if args.a is None else format_scalar(args.a),
            "lam": format_scalar(args.lam)}


def cmd_invariance(args) -> Outcome:
    fam, eps, idx = parse_op_name(args.op)
    spec = _spec_from_args(args, fam, eps, idx)
    try:
        op = cat.build(spec)
        if args.space == "declared":
            space = cat.declared_space(spec)
            if space is None:
                raise InputError(f"{fam} has no declared space; pass --space v1 or pn")
        elif args.space == "v1":
            space = MonomialSpace(args.n, args.m, args.a)
        else:
            space = MonomialSpace(args.n)
        report = check_invariance(op, space)
    except (cat.DomainError, ValueError) as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(str(exc)) from exc
    payload = {"command": "invariance", "operator": args.op, "params": _op_params(args),
               "space": {"kind": args.space, "labels": space.labels(), "dim": space.dim},
               **report.as_dict()}
    text = f"{args.op} on {args.space} space (dim {space.dim}): " + \
        ("invariant" if report.invariant else "NOT invariant")
    for b, t in report.failures:
        text += f"\n  {b} -> {t}"
    return Outcome(payload, text, EXIT_OK if report.invariant else EXIT_FINDING)


def cmd_algebra(args) -> Outcome:
    try:
        report = cat.verify_relation(args.relation, args.n, args.m, args.a, args.lam)
    except (cat.DomainError, ValueError) as exc:
        raise InputError(str(exc)) from exc
    payload = {"command": "algebra", "params": _op_params(args), **report.as_dict()}
    lines = [f"relation: {report.name}", f"holds: {'true' if report.holds else 'false'}",
             f"scope: {report.scope}"]
    for k, v in sorted(report.details.items()):
        lines.append(f"{k}: {v}")
    if not report.holds:
        lines.append(f"residual: {payload['residual']}")
    return Outcome(_jsonable(payload), "\n".join(lines),
                   EXIT_OK if report.holds else EXIT_FINDING)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (bool, int, float, str)) or obj is None:
        return obj
    return format_entry(obj) if not isinstance(obj, Fraction) else format_scalar(obj)


# ---------------------------------------------------------------------------
# case-level commands

def cmd_hamiltonian(args) -> Outcome:
    case = args.case
    p = _params(case, _param_sets(args, single=True)[0])
    payload = {"command": "hamiltonian", "action": args.action, "case": case,
               "params": cs.param_dict(case, p)}
    status = EXIT_OK
    if case == "polypot":
        res = _guard(ham.build_polypot_pipeline, p)
        closed = ham.polypot_closed_form(p)
        residual = res.tilde - closed
        payload.update(physical=res.physical.as_dict(), gauged=res.gauged.as_dict(),
                       algebraic=res.tilde.as_dict(), space=res.space.labels(),
                       restriction=_matrix_strings(restrict(res.tilde, res.space)))
        if p.p1 == 0 and p.epsilon == 0:
            payload["closed_form_residual"] = residual.as_dict()
            status = EXIT_OK if residual.is_zero() else EXIT_FINDING
        text = f"physical:\n{res.physical.format()}\nalgebraic:\n{res.tilde.format()}"
    elif case == "lame":
        res = _guard(ham.build_lame_pipeline, p)
        residual = res.tilde - ham.lame_closed_form(p)
        payload.update(kinetic_in_x=res.kinetic.term_list(), gauged=res.gauged.as_dict(),
                       algebraic=res.tilde.as_dict(), space=res.space.labels(),
                       restriction=_matrix_strings(restrict(res.tilde, res.space)),
                       closed_form_residual=residual.as_dict())
        status = EXIT_OK if residual.is_zero() else EXIT_FINDING
        text = (f"kinetic in x = sn^2: {res.kinetic.format()}\nalgebraic:\n{res.tilde.format()}"
                f"\nclosed-form residual:\n{residual.format()}")
    else:
        red = ham.build_bosehubbard_reduced(p)
        payload.update(physical_z=ham.bh_physical_z(p).term_list(), reduced=red.hat.term_list(),
                       indicial=red.indicial().format("s"),
                       t_form={str(s): red.t_form(s).term_list() for s in (0, Fraction(1, 2))},
                       E0=format_scalar(p.E0))
        text = (f"physical in z: {ham.bh_physical_z(p).format()}\nreduced: {red.hat.format()}"
                f"\nindicial polynomial in s: {red.indicial().format('s')}")
    return Outcome(_jsonable(payload), text, status)


def _guard(fn, *a):
    try:
        return fn(*a)
    except ham.ParameterError as exc:
        raise InputError(str(exc)) from exc


def _matrix_strings(mat) -> list[list[str]]:
    return [[format_entry(e) for e in row] for row in mat]


def _chains(case, p) -> list[cs.Chain]:
    try:
        return cs.chains(case, p)
    except ham.ParameterError as exc:
        raise InputError(str(exc)) from exc


def cmd_recurrence(args) -> Outcome:
    case = args.case
    p = _params(case, _param_sets(args, single=True)[0])
    pd = cs.param_dict(case, p)
    chains_out, rows, lines = [], [], []
    for ch in _chains(case, p):
        sys_ = ch.system
        gen = rec.generate(sys_, args.upto)
        tr = rec.truncation_polynomial(sys_)
        levels = rec.format_levels(gen)
        chains_out.append({
            "chain": ch.label, **sys_.as_dict(),
            "free_parameters": [list(k) for k in gen.params],
            "degeneracies": tr.degeneracies,
            "truncation_conditions": [list(c) for c in tr.conditions],
            "levels": levels,
            "truncation_polynomial": tr.polynomial.format("E"),
            "truncation_coefficients": rec.poly_coeff_strings(tr.polynomial),
        })
        for n in range(gen.start, gen.top + 1):
            for i, form in enumerate(gen.V(n)):
                if form is None:
                    continue
                for k in sorted(form.c):
                    for power, c in enumerate(form.coeff(k).coeffs):
                        rows.append([case, *pd.values(), ch.label, "P", n, i, k, power,
                                     format_scalar(c)])
        for power, c in enumerate(tr.polynomial.coeffs):
            rows.append([case, *pd.values(), ch.label, "truncation", "", "", "", power,
                         format_scalar(c)])
        lines.append(f"[{ch.label}] offsets {sys_.as_dict()['offsets']}")
        lines.append(f"  C(n) = {sys_.as_dict()['C']}")
        lines.append(f"  A(n) = {sys_.as_dict()['A']}")
        lines.append(f"  B(n) = {sys_.as_dict()['B']}")
        lines.append(f"  free parameters (level, component): {gen.params}")
        lines.append(f"  P(E) = {tr.polynomial.format('E')}")
    payload = {"command": "recurrence", "case": case, "params": pd, "upto": args.upto,
               "chains": chains_out}
    header = ["case", *pd.keys(), "chain", "kind", "level", "component", "parameter",
              "power", "coefficient"]
    return Outcome(payload, "\n".join(lines), EXIT_OK, header, rows)


def _spectrum_task(task) -> dict:
    case, values, precision = task
    p = cs.make_params(case, values)
    out = {"case": case, "params": cs.param_dict(case, p), "chains": [], "levels": []}
    for ch in cs.chains(case, p):
        oracle = cs.oracle_check(ch)
        P = rational_polynomial(oracle.truncation)
        roots = [{"lo": format_scalar(lo), "hi": format_scalar(hi)} for lo, hi in real_roots(P, precision)]
        approx = root_values(P)
        for r, v in zip(roots, approx):
            r["approx"] = v
        out["chains"].append({"chain": ch.label, "truncation_polynomial": oracle.truncation.format("E"),
                              "coefficients": rec.poly_coeff_strings(oracle.truncation),
                              "degree": oracle.truncation.degree, "roots": roots,
                              "restriction_charpoly": oracle.charpoly.format("E"),
                              "proportional": oracle.proportional,
                              "series_eigenvector": oracle.series_eigenvector})
        out["levels"].extend(approx)
    out["levels"].sort()
    return out


def cmd_spectrum(args) -> Outcome:
    tasks = []
    for values in _param_sets(args, single=False):
        _params(args.case, values)              # validate before fanning out
        tasks.append((args.case, values, args.precision))
    results = _pool_map(_spectrum_task, tasks)
    ok = all(c["proportional"] and c["series_eigenvector"] for r in results for c in r["chains"])
    lines, rows = [], []
    for r in results:
        lines.append(f"{r['case']} {r['params']}")
        for c in r["chains"]:
            lines.append(f"  [{c['chain']}] P(E) = {c['truncation_polynomial']}")
            lines.append(f"    roots: {[round(x['approx'], 12) for x in c['roots']]}")
            lines.append(f"    matches restriction charpoly: {c['proportional']}")
            for j, x in enumerate(c["roots"]):
                rows.append([r["case"], *r["params"].values(), c["chain"], j, x["lo"], x["hi"],
                             repr(x["approx"])])
    pnames = list(results[0]["params"]) if results else []
    payload = {"command": "spectrum", "case": args.case, "results": results}
    header = ["case", *pnames, "chain", "root_index", "lo", "hi", "approx"]
    return Outcome(payload, "\n".join(lines), EXIT_OK if ok else EXIT_FINDING, header, rows)


def _verify_task(task) -> dict:
    case, values, grid, levels, tol = task
    if case == "harmonic":
        spec = solve_spectrum(harmonic_problem(grid or 4000), levels or 3, estimate_order=True)
        alg = [2.0 * k + 1 for k in range(levels or 3)]
        rep = compare(alg, spec.values, tol=tol)
        return {"case": case, "params": {}, "algebraic": alg, "numeric": spec.values.tolist(),
                "residuals": rep.residuals, "tolerance": tol, "grids": sorted(spec.raw),
                "matches": rep.matches, "unmatched": rep.unmatched, "ok": rep.ok}
    p = cs.make_params(case, values)
    return verify_case(case, p, levels, grid, tol).as_dict()


def cmd_verify(args) -> Outcome:
    tasks = []
    for values in _param_sets(args, single=False):
        if args.case != "harmonic":
            _params(args.case, values)
        tasks.append((args.case, values, args.grid, args.levels, args.tol))
    results = _pool_map(_verify_task, tasks)
    ok = all(r["ok"] for r in results)
    lines, rows = [], []
    for r in results:
        lines.append(f"{r['case']} {r['params']} grids {r['grids']}: "
                     + ("all algebraic levels found" if r["ok"] else "UNMATCHED levels"))
        for j, m in enumerate(r["matches"]):
            lines.append(f"  {j}: algebraic {m['algebraic']:.12g}  numeric {m['numeric']:.12g}"
                         f"  residual {m['residual']:.3e}")
            rows.append([r["case"], *r["params"].values(), j, repr(m["algebraic"]),
                         repr(m["numeric"]), repr(m["residual"])])
    pnames = list(results[0]["params"]) if results else []
    payload = {"command": "verify", "case": args.case, "results": results}
    header = ["case", *pnames, "level_index", "algebraic", "numeric", "residual"]
    return Outcome(_jsonable(payload), "\n".join(lines), EXIT_OK if ok else EXIT_FINDING,
                   header, rows)


# ---------------------------------------------------------------------------
# parser and emission

def _add_op_params(p):
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--a", type=rational_arg, default=None, help="exponent a (formal if omitted)")
    p.add_argument("--lam", type=rational_arg, default=Fraction(-1))


def _add_case_params(p, cases):
    p.add_argument("--case", required=True, choices=cases)
    g = p.add_argument_group("case parameters (exact rationals; comma lists sweep)")
    for name in CASE_PARAMS:
        g.add_argument(f"--{name}", type=rational_list_arg, default=None)


def build_parser() -> Parser:
    parser = Parser(prog="qespoly", description="Exact QES operators, recurrences and spectra.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=Parser)

    p = sub.add_parser("catalog", help="list the families or show the operators of one")
    p.add_argument("action", choices=("list", "show"))
    p.add_argument("family", nargs="?", default=None)
    p.add_argument("--family", dest="family_opt", default=None, help="same as the positional")
    _add_op_params(p)
    p.add_argument("--emit", choices=("json", "text"), default="text")

    p = sub.add_parser("invariance", help="check that an operator preserves a space")
    p.add_argument("--op", required=True, help="e.g. J+, j0, k_a-, K, Q:1, S:2")
    p.add_argument("--space", choices=("declared", "v1", "pn"), default="declared")
    _add_op_params(p)
    p.add_argument("--emit", choices=("json", "text"), default="text")

    p = sub.add_parser("algebra", help="verify an algebraic relation")
    p.add_argument("--relation", required=True, choices=cat.RELATIONS)
    _add_op_params(p)
    p.add_argument("--emit", choices=("json", "text"), default="text")

    p = sub.add_parser("hamiltonian", help="physical and algebraic forms of a case")
    p.add_argument("action", choices=("show",))
    _add_case_params(p, cs.CASES)
    p.add_argument("--emit", choices=("json", "text"), default="text")

    p = sub.add_parser("recurrence", help="recurrence, coefficient tables, truncation polynomial")
    _add_case_params(p, cs.CASES)
    p.add_argument("--upto", type=int, default=8)
    p.add_argument("--emit", choices=("json", "csv", "text"), default="json")

    p = sub.add_parser("spectrum", help="algebraic levels from truncation polynomials")
    _add_case_params(p, cs.CASES)
    p.add_argument("--precision", type=rational_arg, default=Fraction(1, 2 ** 30))
    p.add_argument("--emit", choices=("json", "csv", "text"), default="json")

    p = sub.add_parser("verify", help="algebraic levels against finite differences")
    _add_case_params(p, cs.CASES + ("harmonic",))
    p.add_argument("--grid", type=int, default=None)
    p.add_argument("--levels", type=int, default=None)
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--emit", choices=("json", "csv", "text"), default="json")
    return parser


def _check_ranges(args) -> None:
    if getattr(args, "upto", 0) < 0:
        raise InputError("--upto must be non-negative")
    if getattr(args, "grid", None) is not None and args.grid < 200:
        raise InputError("--grid must be at least 200")
    if getattr(args, "levels", None) is not None and args.levels < 1:
        raise InputError("--levels must be positive")
    if getattr(args, "precision", 1) <= 0:
        raise InputError("--precision must be positive")


HANDLERS = {"catalog": cmd_catalog, "invariance": cmd_invariance, "algebra": cmd_algebra,
            "hamiltonian": cmd_hamiltonian, "recurrence": cmd_recurrence,
            "spectrum": cmd_spectrum, "verify": cmd_verify}


def load_schema(command: str) -> dict:
    text = resources.files("qespoly").joinpath("schemas").joinpath(f"{command}.json").read_text()
    return json.loads(text)


def render(outcome: Outcome, command: str, emit: str) -> str:
    if emit == "json":
        jsonschema.validate(outcome.payload, load_schema(command))
        return json.dumps(outcome.payload, indent=2, sort_keys=True) + "\n"
    if emit == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(outcome.csv_header)
        w.writerows(outcome.csv_rows)
        return buf.getvalue()
    return outcome.text + "\n"


def run(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _check_ranges(args)
        outcome = HANDLERS[args.command](args)
    except InputError as exc:
        print(f"qespoly {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    stdout.write(render(outcome, args.command, args.emit))
    return outcome.status


def main() -> None:
    sys.exit(run())
