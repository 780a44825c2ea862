"""Command dispatch and report formatting.

Exit codes: 0 success or compatible, 1 obstructed, 2 inconclusive,
3 usage error, 4 parse error, 5 computation error (budget, degenerate point,
missing syzygy).
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Callable

from ..brackets import coordinate_multibracket, multibracket
from ..idealmod.compat import (COMPATIBLE, INCONCLUSIVE, OBSTRUCTED, Reducer,
                               check_compatibility, reduced_bracket)
from ..idealmod.groebner import BudgetExceeded
from ..idealmod.syzygy import first_syzygy
from ..jetcalc import JetError
from ..symbolic.gci import gci_check
from ..symbolic.spencer import NotStabilized, hilbert_data, spencer_cohomology
from ..symbolic.symbols import format_xi, symbols_of
from .dsl import ParseError, SystemFile, parse
from .fixtures import FIXTURES

SCHEMA = 1
EXIT = {COMPATIBLE: 0, OBSTRUCTED: 1, INCONCLUSIVE: 2}
USAGE, PARSE, COMPUTE = 3, 4, 5

COMMANDS = ("bracket", "reduce", "compat", "symbols", "spencer", "gci", "dims", "syzygy")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _parser() -> argparse.ArgumentParser:
    p = _Parser(prog="jetbracket", description="Multi-bracket compatibility checks for PDE systems.")
    p.add_argument("--verbose", "-v", action="store_true", help="log Groebner progress")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        c = sub.add_parser(name)
        c.add_argument("file", help="system file, or @NAME for a built-in fixture")
        _common(c)
    f = sub.add_parser("fixtures")
    f.add_argument("action", choices=["list", "show", "run"])
    f.add_argument("name", nargs="?")
    f.add_argument("--slow", action="store_true", help="include slow fixtures in 'run'")
    _common(f)
    return p


def _common(c: argparse.ArgumentParser) -> None:
    c.add_argument("--max-degree", type=int, default=24)
    c.add_argument("--max-monomials", type=int, default=200_000)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--cap", type=int, default=None, help="prolongation/interpolation cap")
    c.add_argument("--json", action="store_true")
    c.add_argument("--subset", default=None, help="1-based equation indices, e.g. 1,2,3")
    c.add_argument("--invertible", action="append", default=[], help="extra invertible expression")
    c.add_argument("--form", choices=["coordinate", "linearization"], default="coordinate")


def load(ref: str, extra_invertibles: list[str] = ()) -> SystemFile:
    if ref.startswith("@"):
        if ref[1:] not in FIXTURES:
            raise UsageError(f"no fixture named {ref[1:]!r}")
        text = FIXTURES[ref[1:]].text
    else:
        try:
            text = Path(ref).read_text(encoding="utf-8")
        except OSError as exc:
            raise UsageError(str(exc)) from None
    if extra_invertibles:
        present = {line.strip() for line in text.splitlines()}
        text += "".join(f"invertible {e}\n" for e in extra_invertibles
                        if f"invertible {e}" not in present)
    return parse(text)


def _subsets(sf: SystemFile, text: str | None) -> list[tuple[int, ...]] | None:
    if text is None:
        return None
    try:
        idx = tuple(int(s) - 1 for s in text.split(","))
    except ValueError:
        raise UsageError(f"bad --subset {text!r}") from None
    if len(idx) != sf.m + 1 or len(set(idx)) != len(idx) or \
            any(not 0 <= i < len(sf.equations) for i in idx):
        raise UsageError(f"--subset needs {sf.m + 1} distinct indices in 1..{len(sf.equations)}")
    return [tuple(sorted(idx))]


def summary(sf: SystemFile) -> dict:
    system = sf.system()
    return {"name": sf.name, "n": sf.n, "m": sf.m, "r": system.r, "base": sf.base,
            "unknowns": sf.unknowns, "params": [p for p, _ in sf.params],
            "invertibles": [str(d) for d in sf.invertibles],
            "equations": [{"name": nm, "order": e.order(), "poly": str(e)}
                          for nm, e, _ in sf.equations]}


# each command returns (exit code, json fields, text lines)
Result = tuple[int, dict, list[str]]


def cmd_bracket(sf: SystemFile, args) -> Result:
    system = sf.system()
    fn = coordinate_multibracket if args.form == "coordinate" else multibracket
    chosen = _subsets(sf, args.subset) or system.subsets()
    items, lines = [], []
    for s in chosen:
        value = fn([system.equations[i] for i in s])
        names = [system.eq_names[i] for i in s]
        items.append({"subset": [i + 1 for i in s], "names": names, "bracket": str(value)})
        lines.append(f"[{', '.join(names)}] = {value}")
    if not chosen:
        lines.append("no brackets: r <= m")
    return 0, {"brackets": items}, lines


def _bracket_lines(results) -> list[str]:
    lines = []
    for b in results:
        head = f"[{', '.join(b.names)}] mod J_{b.s}"
        if b.status == "budget":
            lines.append(f"{head}: budget exceeded ({b.note})")
        else:
            lines.append(f"{head} = {b.normal_form}")
    return lines


def cmd_reduce(sf: SystemFile, args) -> Result:
    system = sf.system()
    if system.r <= system.m:
        return 0, {"brackets": []}, ["no brackets: r <= m"]
    reducer = Reducer(system, args.max_degree, args.max_monomials)
    chosen = _subsets(sf, args.subset) or system.subsets()
    results = [reduced_bracket(system, s, args.form, reducer) for s in chosen]
    if any(b.status == "nonzero" for b in results):
        code = EXIT[OBSTRUCTED]
    elif any(b.status == "budget" for b in results):
        code = EXIT[INCONCLUSIVE]
    else:
        code = 0
    return code, {"brackets": [b.as_dict() for b in results]}, _bracket_lines(results)


def _verdict_text(verdict: str) -> str:
    return "obstructed (polynomial model)" if verdict == OBSTRUCTED else verdict


def cmd_compat(sf: SystemFile, args) -> Result:
    system = sf.system()
    report = check_compatibility(system, args.max_degree, args.max_monomials, args.seed,
                                 _subsets(sf, args.subset), args.form)
    lines = [f"verdict: {_verdict_text(report.verdict)}"]
    lines += _bracket_lines(report.brackets)
    if report.gci is not None:
        lines.append(f"GCI: {'holds' if report.gci['holds'] else 'fails'}"
                     + "".join(f"; {n}" for n in report.gci["notes"]))
    lines += [f"note: {n}" for n in report.notes]
    doc = report.as_dict()
    if report.verdict == OBSTRUCTED:
        doc["model"] = "polynomial"
    return EXIT[report.verdict], doc, lines


def cmd_symbols(sf: SystemFile, args) -> Result:
    sym = symbols_of(sf.system(), args.seed)
    rows = [[format_xi(p) for p in row] for row in sym.rows]
    lines = [f"{nm} (order {k}): [{', '.join(row)}]"
             for (nm, _, _), k, row in zip(sf.equations, sym.orders, rows)]
    return 0, {"symbols": rows, "orders": sym.orders}, lines


def cmd_spencer(sf: SystemFile, args) -> Result:
    sym = symbols_of(sf.system(), args.seed)
    max_i = args.cap if args.cap is not None else sum(sym.orders) + 1
    table = spencer_cohomology(sym, max_i)
    cells = [{"i": i, "j": j, "dim": v} for (i, j), v in table.nonzero().items()]
    lines = [f"dim g_i: {table.dims}"]
    lines += [f"H^{{{c['i']},{c['j']}}} = {c['dim']}" for c in cells]
    return 0, {"spencer": {"max_i": max_i, "dims_g": table.dims, "nonzero": cells}}, lines


def cmd_gci(sf: SystemFile, args) -> Result:
    report = gci_check(symbols_of(sf.system(), args.seed))
    lines = [f"GCI: {'holds' if report.holds else 'fails'}",
             f"dim V(J_m) = {report.dim_top} (expected {report.dim_top_expected})"]
    if report.dim_sub is not None:
        lines.append(f"dim V(J_(m-1)) = {report.dim_sub}")
    lines += [f"note: {n}" for n in report.notes]
    return 0, {"gci": report.as_dict()}, lines


def cmd_dims(sf: SystemFile, args) -> Result:
    sym = symbols_of(sf.system(), args.seed)
    data = hilbert_data(sym, cap=args.cap if args.cap is not None else 16)
    d = data.d if data.d.denominator != 1 else data.d.numerator
    tail = " (finite type)" if data.finite_type else ""
    doc = {"dims": {"p": data.p, "d": str(d), "finite_type": data.finite_type, "dims_g": data.dims}}
    return 0, doc, [f"p={data.p}, d={d}{tail}", f"dim g_i: {data.dims}"]


def cmd_syzygy(sf: SystemFile, args) -> Result:
    system = sf.system()
    chosen = _subsets(sf, args.subset) or system.subsets()
    items, lines = [], []
    for s in chosen:
        op = first_syzygy(system, s)
        row = [str(e) for e in op.as_row(system.r)]
        names = [system.eq_names[i] for i in s]
        items.append({"subset": [i + 1 for i in s], "names": names, "operator": row})
        lines.append(f"nabla[{', '.join(names)}] = ({'; '.join(row)})")
    return 0, {"syzygies": items}, lines


HANDLERS: dict[str, Callable[[SystemFile, argparse.Namespace], Result]] = {
    "bracket": cmd_bracket, "reduce": cmd_reduce, "compat": cmd_compat, "symbols": cmd_symbols,
    "spencer": cmd_spencer, "gci": cmd_gci, "dims": cmd_dims, "syzygy": cmd_syzygy,
}


def run(command: str, sf: SystemFile, args: argparse.Namespace) -> Result:
    return HANDLERS[command](sf, args)


def _fixtures(args, out) -> int:
    if args.action == "list":
        for f in FIXTURES.values():
            out.write(f"{f.name:22s} {f.summary}{' [slow]' if f.slow else ''}\n")
        return 0
    if args.action == "show":
        if args.name not in FIXTURES:
            raise UsageError(f"no fixture named {args.name!r}")
        out.write(FIXTURES[args.name].text)
        return 0
    failures = 0
    chosen = [FIXTURES[args.name]] if args.name else [f for f in FIXTURES.values()
                                                       if args.slow or not f.slow]
    for f in chosen:
        sf = parse(f.text)
        code, doc, _ = cmd_compat(sf, args)
        ok = doc["verdict"] == f.verdict
        msg = f"verdict {doc['verdict']}"
        if f.dims is not None:
            _, ddoc, dl = cmd_dims(parse(f.text), args)
            got = (ddoc["dims"]["p"], int(ddoc["dims"]["d"]))
            ok = ok and got == f.dims
            msg += f", {dl[0]}"
        failures += not ok
        out.write(f"{'PASS' if ok else 'FAIL'} {f.name}: {msg}\n")
    return 0 if failures == 0 else 1


def main(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = _parser().parse_args(argv)
    except UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return USAGE
    except SystemExit as exc:   # --help
        return 0 if exc.code in (0, None) else USAGE
    if args.verbose:
        logging.basicConfig(level=logging.DEBUG, format="%(relativeCreated)d ms %(message)s")
    try:
        if args.command == "fixtures":
            return _fixtures(args, out)
        sf = load(args.file, args.invertible)
        code, doc, lines = run(args.command, sf, args)
    except UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return USAGE
    except ParseError as exc:
        sys.stderr.write(f"{getattr(args, 'file', '')}:{exc}\n")
        return PARSE
    except (BudgetExceeded, NotStabilized, JetError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return COMPUTE
    if args.json:
        doc = {"schema": SCHEMA, "command": args.command, "system": summary(sf), **doc}
        json.dump(doc, out, indent=2)
        out.write("\n")
    else:
        out.write(f"system {sf.name}: n={sf.n}, m={sf.m}, r={len(sf.equations)}\n")
        for line in lines:
            out.write(line + "\n")
    return code
