"""badproj command line: quadratic-form parsing, subspace files and reports."""

from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Sequence

from . import __version__
from .critical import Mode, Outcome, build_system, check, check_point, point_ideal
from .hypersurface import Pencil, components, eliminate_slice, grid_points, make_predicate, resultant2, scan_pencil
from .pataki import RankOptions, decide
from .poly import Budget, UNLIMITED
from .report import SCHEMA, matrix_doc, parse_matrix, parse_rational, q, text_lines, verdict_doc
from .sdp import CenterOptions, complementary_pair
from .symspace import Subspace, SymMatrix, rank
from .verify import verify_certificate

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NOT_FOUND = 3
EXIT_PARSE = 4
EXIT_BUDGET = 5


class InputError(ValueError):
    """Malformed input file or expression."""


class BudgetError(RuntimeError):
    pass


# --------------------------------------------------------------------------
# quadratic forms

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<var>x(?P<idx>\d+))|(?P<op>[-+*^])|(?P<bad>\S))")


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    pos: int


def _tokens(expr: str) -> list[_Tok]:
    out, pos = [], 0
    while pos < len(expr):
        m = _TOKEN.match(expr, pos)
        if m is None:        # only trailing whitespace remains
            break
        if m.end() == pos:
            break
        start = m.start(m.lastgroup)
        if m.group("bad") is not None:
            raise InputError(f"syntax error at position {start}: unexpected {m.group('bad')!r}")
        if m.group("num") is not None:
            out.append(_Tok("num", m.group("num"), start))
        elif m.group("var") is not None:
            out.append(_Tok("var", m.group("idx"), start))
        else:
            out.append(_Tok("op", m.group("op"), start))
        pos = m.end()
    out.append(_Tok("end", "", len(expr)))
    return out


def parse_quadratic(expr: str, n: int) -> SymMatrix:
    """Symmetric A with x^T A x equal to the given quadratic form in x1..xn."""
    toks = _tokens(expr)
    i = 0
    acc = [[Fraction(0)] * n for _ in range(n)]

    def peek() -> _Tok:
        return toks[i]

    def take() -> _Tok:
        nonlocal i
        t = toks[i]
        i += 1
        return t

    def fail(t: _Tok, what: str):
        shown = t.text if t.kind != "end" else "end of input"
        raise InputError(f"syntax error at position {t.pos}: expected {what}, found {shown!r}")

    def factor() -> int:
        t = take()
        if t.kind != "var":
            fail(t, "a variable")
        idx = int(t.text)
        if not 1 <= idx <= n:
            raise InputError(f"unknown variable x{idx} at position {t.pos} (n = {n})")
        if peek().kind == "op" and peek().text == "^":
            take()
            e = take()
            if e.kind != "num" or e.text != "2":
                fail(e, "exponent 2")
            return [idx - 1, idx - 1]
        return [idx - 1]

    def term(sign: int):
        start = peek()
        coeff = Fraction(sign)
        vars_: list[int] = []
        if start.kind == "num":
            coeff *= Fraction(take().text)
            while peek().kind == "op" and peek().text == "*":
                take()
                vars_ += factor()
        else:
            vars_ += factor()
            while peek().kind == "op" and peek().text == "*":
                take()
                vars_ += factor()
        if len(vars_) > 2:
            raise InputError(f"degree {len(vars_)} term at position {start.pos}; forms must be quadratic")
        if len(vars_) < 2:
            if coeff == 0:
                return
            raise InputError(f"degree {len(vars_)} term at position {start.pos}; forms must be homogeneous quadratic")
        a, b = sorted(vars_)
        if a == b:
            acc[a][a] += coeff
        else:
            acc[a][b] += coeff / 2
            acc[b][a] += coeff / 2

    sign = 1
    if peek().kind == "op" and peek().text in "+-":
        sign = -1 if take().text == "-" else 1
    term(sign)
    while peek().kind != "end":
        t = take()
        if t.kind != "op" or t.text not in "+-":
            fail(t, "'+' or '-'")
        term(-1 if t.text == "-" else 1)
    return SymMatrix(acc)


def serialize_quadratic(m: SymMatrix) -> str:
    return m.as_quadratic()


# --------------------------------------------------------------------------
# files


@dataclass
class SubspaceFile:
    n: int
    k: int
    space: Subspace | None           # None for pencils
    pencil: Pencil | None


def _matrix_rows(doc, n: int, where: str, allow_param: bool):
    if not isinstance(doc, list) or len(doc) != n or any(not isinstance(r, list) or len(r) != n for r in doc):
        raise InputError(f"{where}: expected an {n}x{n} array")
    rows = []
    for r in doc:
        row = []
        for v in r:
            if allow_param and isinstance(v, str):
                if "." in v:
                    raise InputError(f"{where}: decimal literal {v!r} not allowed")
                row.append(v)
            else:
                try:
                    row.append(parse_rational(v))
                except (ValueError, ZeroDivisionError) as exc:
                    raise InputError(f"{where}: {exc}") from None
        rows.append(row)
    return rows


def parse_subspace_doc(doc: Any) -> SubspaceFile:
    if not isinstance(doc, dict):
        raise InputError("subspace file must be a JSON object")
    try:
        n = int(doc["n"])
    except (KeyError, TypeError, ValueError):
        raise InputError("missing or invalid 'n'") from None
    if n < 1:
        raise InputError("'n' must be positive")
    param = doc.get("param")
    if param is not None and param != "t":
        raise InputError("only 'param': 't' is supported")
    if ("matrices" in doc) == ("quadrics" in doc):
        raise InputError("give exactly one of 'matrices' or 'quadrics'")
    if "matrices" in doc:
        raw = doc["matrices"]
        if not isinstance(raw, list):
            raise InputError("'matrices' must be a list")
        rows = [_matrix_rows(m, n, f"matrix {i + 1}", param is not None) for i, m in enumerate(raw)]
    else:
        raw = doc["quadrics"]
        if not isinstance(raw, list) or any(not isinstance(e, str) for e in raw):
            raise InputError("'quadrics' must be a list of strings")
        rows = [parse_quadratic(e, n).rows() for e in raw]
    k = doc.get("k", len(rows))
    if k != len(rows):
        raise InputError(f"'k' is {k} but {len(rows)} basis elements were given")
    if k < 1:
        raise InputError("at least one basis element is required")
    if param is not None:
        try:
            pencil = Pencil(n, rows, param)
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(str(exc)) from None
        return SubspaceFile(n, k, None, pencil)
    for idx, r in enumerate(rows):
        for i in range(n):
            for j in range(i + 1, n):
                if r[i][j] != r[j][i]:
                    raise InputError(f"matrix {idx + 1} is not symmetric")
    mats = [SymMatrix(r) for r in rows]
    if rank([m.svec() for m in mats]) < k:
        raise InputError("basis matrices are linearly dependent")
    return SubspaceFile(n, k, Subspace(n, mats), None)


def _read_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except FileNotFoundError:
        raise
    except IsADirectoryError:
        raise FileNotFoundError(path) from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno} column {exc.colno})") from None


def load_subspace_file(path: str) -> SubspaceFile:
    return parse_subspace_doc(_read_json(path))


def _need_space(f: SubspaceFile) -> Subspace:
    if f.space is None:
        raise InputError("this command needs a constant subspace, not a pencil")
    return f.space


def _need_pencil(f: SubspaceFile) -> Pencil:
    if f.pencil is not None:
        return f.pencil
    return Pencil.constant(f.space)


# --------------------------------------------------------------------------
# commands


def _rank_options(args) -> RankOptions:
    return RankOptions(denominator_bound=args.denom_bound, rel_tol=args.tol)


def _tolerances(args) -> dict:
    return {"tol": args.tol, "denom_bound": args.denom_bound}


def _budget(args) -> Budget:
    return Budget(max_seconds=args.budget_seconds) if args.budget_seconds else UNLIMITED


def cmd_decide(args) -> dict:
    L = _need_space(load_subspace_file(args.file))
    return verdict_doc(decide(L, _rank_options(args)), _tolerances(args))


def cmd_certify(args) -> dict:
    L = _need_space(load_subspace_file(args.file))
    doc = _read_json(args.certfile)
    if not isinstance(doc, dict):
        raise InputError("certificate file must be a JSON object")
    res = verify_certificate(L, doc)
    return {"schema": SCHEMA, "command": "certify", "accepted": res.accepted, "verdict": res.verdict,
            "checks": res.checks, "failures": res.failures}


def _point_doc(sys_, p) -> dict:
    return {"x": [q(v) for v in p.x], "Y": matrix_doc(p.Y), "ideal": point_ideal(p, sys_.x_vars)}


def cmd_critical(args) -> dict:
    L = _need_space(load_subspace_file(args.file))
    try:
        sys_ = build_system(L, args.rank, args.mode)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    base = {"schema": SCHEMA, "command": "critical", "rank": args.rank, "mode": sys_.mode.value}
    if args.verify:
        pdoc = _read_json(args.verify)
        try:
            x = [parse_rational(v) for v in pdoc["x"]]
            Y = parse_matrix(pdoc["Y"])
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"point file: {exc}") from None
        pc = check_point(L, x, Y, args.rank)
        base.update({"valid": pc.valid, "x_rank": pc.x_rank, "y_rank": pc.y_rank,
                     "x_psd": pc.x_psd, "y_psd": pc.y_psd, "failures": list(pc.failures)})
        return base
    if args.check:
        rep = check(sys_, _budget(args))
        if rep.outcome is Outcome.BUDGET:
            raise BudgetError(rep.reason or "budget exhausted")
        base.update({"outcome": rep.outcome.value, "saturated": rep.saturated, "count": rep.count,
                     "points": [_point_doc(sys_, p) for p in rep.points],
                     "charts": len(rep.charts), "reason": rep.reason})
        return base
    base.update({"ring": list(sys_.ring.variables), "generators": [str(g) for g in sys_.generators]})
    if not args.json:
        base["macaulay2"] = sys_.to_macaulay2()
    return base


def cmd_components(args) -> dict:
    try:
        comps = components(args.n, args.k)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    return {"schema": SCHEMA, "command": "components", "n": args.n, "k": args.k,
            "components": [{"s": c.s, "codim_c": c.c, "i": c.index, "label": c.label,
                            "degree": c.degree if c.degree is not None else "Unknown"} for c in comps]}


def cmd_resultant2(args) -> dict:
    L = _need_space(load_subspace_file(args.file))
    try:
        r = resultant2(L)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    return {"schema": SCHEMA, "command": "resultant2", "R": q(r.R), "classification": r.classification.value}


def _parse_grid(text: str) -> list[Fraction]:
    parts = text.split(":")
    if len(parts) != 3:
        raise InputError("grid must look like a:b:steps")
    try:
        a, b = parse_rational(parts[0]), parse_rational(parts[1])
        steps = int(parts[2])
        return grid_points(a, b, steps)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"grid: {exc}") from None


def cmd_scan(args) -> dict:
    P = _need_pencil(load_subspace_file(args.file))
    grid = _parse_grid(args.grid)
    try:
        pred = make_predicate(args.predicate, args.rank, _budget(args), args.mode)
        eps = parse_rational(args.bisect) if args.bisect is not None else None
    except ValueError as exc:
        raise InputError(str(exc)) from None
    res = scan_pencil(P, grid, pred, eps)
    return {"schema": SCHEMA, "command": "scan", "predicate": args.predicate,
            "samples": [{"t": q(t), "outcome": o.lower()} for t, o in res.samples],
            "skipped": [q(t) for t in res.skipped],
            "transitions": [{"lo": q(tr.lo), "hi": q(tr.hi), "before": tr.before.lower(),
                             "after": tr.after.lower()} for tr in res.transitions]}


def cmd_slice(args) -> dict:
    P = _need_pencil(load_subspace_file(args.file))
    try:
        res = eliminate_slice(P, args.rank, _budget(args))
    except ValueError as exc:
        raise InputError(str(exc)) from None
    if res.status == "Budget":
        raise BudgetError(res.reason or "budget exhausted")
    f = res.polynomial
    return {"schema": SCHEMA, "command": "slice", "rank": args.rank, "status": res.status,
            "generators": [str(g) for g in res.generators],
            "degree": f.degree(P.param) if f is not None else None}


def _floats(a) -> list:
    return [[float(f"{v:.6e}") for v in r] for r in a]


def cmd_sdp_pair(args) -> dict:
    L = _need_space(load_subspace_file(args.file))
    pair = complementary_pair(L, CenterOptions(rel_tol=args.tol))
    flags = sorted(set(pair.left.flags) | set(pair.right.flags))
    return {"schema": SCHEMA, "command": "sdp-pair", "rank_X": pair.rank_x, "rank_Y": pair.rank_y,
            "gap": float(f"{pair.gap:.3e}"), "product_norm": float(f"{pair.product_norm:.3e}"),
            "X": _floats(pair.X), "Y": _floats(pair.Y), "flags": flags}


COMMANDS = {
    "decide": cmd_decide,
    "certify": cmd_certify,
    "critical": cmd_critical,
    "components": cmd_components,
    "resultant2": cmd_resultant2,
    "scan": cmd_scan,
    "slice": cmd_slice,
    "sdp-pair": cmd_sdp_pair,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=1e-6, help="relative rank tolerance")
    common.add_argument("--denom-bound", type=int, default=10 ** 4, help="first rationalization denominator cap")
    common.add_argument("--budget-seconds", type=float, default=None, help="time cap for Groebner work")
    common.add_argument("--mode", choices=[m.value for m in Mode], default=None,
                        help="parametrization of Y in critical systems")
    common.add_argument("--json", action="store_true", help="emit JSON instead of text")

    p = argparse.ArgumentParser(prog="badproj", description="Closedness of projected PSD cones.")
    p.add_argument("--version", action="version", version=f"badproj {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    s = sub.add_parser("decide", parents=[common], help="good/bad verdict with a certificate")
    s.add_argument("file")
    s = sub.add_parser("certify", parents=[common], help="re-check a certificate independently")
    s.add_argument("file")
    s.add_argument("certfile")
    s = sub.add_parser("critical", parents=[common], help="critical equations for a rank")
    s.add_argument("file")
    s.add_argument("--rank", type=int, required=True)
    g = s.add_mutually_exclusive_group()
    g.add_argument("--print", action="store_true", help="print the system (default)")
    g.add_argument("--check", action="store_true", help="emptiness / point count")
    g.add_argument("--verify", metavar="POINTFILE", help="check a candidate point exactly")
    s = sub.add_parser("components", parents=[common], help="components of the bad locus")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s = sub.add_parser("resultant2", parents=[common], help="n=2 discriminant and closedness class")
    s.add_argument("file")
    s = sub.add_parser("scan", parents=[common], help="predicate along a pencil")
    s.add_argument("file")
    s.add_argument("--grid", required=True, help="a:b:steps")
    s.add_argument("--predicate", required=True, choices=["decide", "nc_test", "critical_empty"])
    s.add_argument("--rank", type=int, default=None, help="rank for critical_empty")
    s.add_argument("--bisect", default=None, metavar="EPS")
    s = sub.add_parser("slice", parents=[common], help="eliminate to a polynomial in t")
    s.add_argument("file")
    s.add_argument("--rank", type=int, required=True)
    s = sub.add_parser("sdp-pair", parents=[common], help="numeric maximal-rank complementary pair")
    s.add_argument("file")
    return p


def emit_report(doc: dict, fmt: str = "json") -> str:
    if fmt == "json":
        return json.dumps(doc, indent=2, sort_keys=False) + "\n"
    return "\n".join(text_lines(doc)) + "\n"


def _error(kind: str, msg: str, as_json: bool, out) -> None:
    if as_json:
        out.write(json.dumps({"schema": SCHEMA, "error": kind, "message": msg}) + "\n")
    print(f"badproj: {kind}: {msg}", file=sys.stderr)


def _glue_values(argv: list[str]) -> list[str]:
    """Let ``--grid -1:1:5`` through: argparse would read the value as an option."""
    out, i = [], 0
    while i < len(argv):
        a = argv[i]
        if a in ("--grid", "--bisect") and i + 1 < len(argv):
            out.append(f"{a}={argv[i + 1]}")
            i += 2
            continue
        out.append(a)
        i += 1
    return out


def run(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    argv = _glue_values(list(sys.argv[1:] if argv is None else argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else EXIT_USAGE
    try:
        doc = COMMANDS[args.command](args)
    except FileNotFoundError as exc:
        _error("file-not-found", str(exc.filename or exc), args.json, out)
        return EXIT_NOT_FOUND
    except InputError as exc:
        _error("parse-error", str(exc), args.json, out)
        return EXIT_PARSE
    except BudgetError as exc:
        _error("budget", str(exc), args.json, out)
        return EXIT_BUDGET
    if args.command == "critical" and not args.json and "macaulay2" in doc:
        out.write(doc["macaulay2"])
        return EXIT_OK
    out.write(emit_report(doc, "json" if args.json else "text"))
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
