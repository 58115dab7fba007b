"""Command-line interface.

Exit codes: 0 success, 1 a negative mathematical verdict (not a rack,
not bijective, inconsistent numbering, invalid presentation), 2 bad input
or usage.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from typing import Any, Optional, Sequence

from . import algebra, coloring, moves, presentation, transforms
from .algebra import RackTable, load_rack
from .presentation import Presentation, load_presentation


@dataclass
class CommandResult:
    exit_code: int
    text: str
    payload: Any = None
    format: str = "text"

    @property
    def output(self) -> str:
        if self.format == "json" and self.payload is not None:
            return json.dumps(self.payload, indent=2) + "\n"
        return self.text if self.text.endswith("\n") else self.text + "\n"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# --- rack commands -----------------------------------------------------------

def _axiom_lines(t: RackTable):
    r = t.axioms
    T = t.table
    q1 = "holds" if r.q1 else f"fails at a={r.q1_witness} ({r.q1_witness}*{r.q1_witness}={T[r.q1_witness][r.q1_witness]})"
    q2 = "holds" if r.q2 else f"fails: right translation by {r.q2_witness} is not a bijection"
    if r.q3:
        q3 = "holds"
    else:
        a, b, c = r.q3_witness
        q3 = f"fails at (a,b,c)=({a},{b},{c})"
    return [f"Q1 a*a=a: {q1}", f"Q2 right translations bijective: {q2}",
            f"Q3 (a*b)*c=(a*c)*(b*c): {q3}"]


def _kind(t: RackTable) -> str:
    if algebra.is_quandle(t):
        return "quandle"
    if algebra.is_rack(t):
        return "rack (not a quandle)"
    return "not a rack"


def cmd_rack_check(args) -> CommandResult:
    t = load_rack(args.src)
    r = t.axioms
    lines = [f"{t.name}, order {t.order}"] + _axiom_lines(t) + [f"classification: {_kind(t)}"]
    payload = {
        "rack": t.name, "order": t.order, "table": [list(row) for row in t.table],
        "q1": {"holds": r.q1, "witness": r.q1_witness},
        "q2": {"holds": r.q2, "witness": r.q2_witness},
        "q3": {"holds": r.q3, "witness": list(r.q3_witness) if r.q3_witness else None},
        "is_rack": algebra.is_rack(t), "is_quandle": algebra.is_quandle(t),
    }
    return CommandResult(0 if algebra.is_rack(t) else 1, "\n".join(lines), payload)


def cmd_rack_kink(args) -> CommandResult:
    t = load_rack(args.src)
    k = algebra.kink_map(t)
    rep = algebra.verify_kink_properties(t)
    lines = [
        f"kink map of {t.name}",
        "iota:     " + " ".join(f"{a}->{b}" for a, b in enumerate(k.forward)),
        "iota^-1:  " + " ".join(f"{a}->{b}" for a, b in enumerate(k.inverse)),
        f"period: {k.period}",
        f"K1 bijective, iota(a)*a=a: {'holds' if rep.k1 else f'fails at {rep.k1_witness}'}",
        f"K2 iota(a)*b=iota(a*b): {'holds' if rep.k2 else f'fails at {rep.k2_witness}'}",
        f"K3 a*iota(b)=a*b: {'holds' if rep.k3 else f'fails at {rep.k3_witness}'}",
    ]
    payload = {"rack": t.name, "forward": list(k.forward), "inverse": list(k.inverse),
               "period": k.period, "k1": rep.k1, "k2": rep.k2, "k3": rep.k3}
    return CommandResult(0 if rep.ok else 1, "\n".join(lines), payload)


def cmd_rack_assoc(args) -> CommandResult:
    t = load_rack(args.src)
    q = algebra.associated_quandle(t)
    payload = {"rack": t.name, "order": q.order, "table": [list(row) for row in q.table]}
    return CommandResult(0, algebra.format_rack(q), payload)


def cmd_rack_components(args) -> CommandResult:
    t = load_rack(args.src)
    comps = algebra.connected_components(t)
    lines = [f"{t.name}: {len(comps)} component{'s' if len(comps) != 1 else ''}"]
    lines.extend("  {" + ", ".join(map(str, c)) + "}" for c in comps)
    return CommandResult(0, "\n".join(lines), {"rack": t.name, "components": comps})


def cmd_rack_enumerate(args) -> CommandResult:
    tables = list(algebra.enumerate_racks(args.n))
    if args.quandles:
        tables = [t for t in tables if algebra.is_quandle(t)]
    blocks = [f"# {len(tables)} tables"]
    for i, t in enumerate(tables):
        blocks.append(f"# table {i}\n" + algebra.format_rack(t).rstrip("\n"))
    payload = {"order": args.n, "count": len(tables),
               "tables": [[list(row) for row in t.table] for t in tables]}
    return CommandResult(0, "\n\n".join(blocks), payload)


# --- colorings and presentations ---------------------------------------------

def cmd_color(args) -> CommandResult:
    p = load_presentation(args.pres)
    t = load_rack(args.rack)
    if args.action == "count":
        n = coloring.count_colorings(p, t, args.workers)
        return CommandResult(0, str(n), {"rack": t.name, "count": n})
    cols = coloring.enumerate_colorings(p, t)
    text = "\n".join(coloring.format_coloring(p, c) for c in cols)
    return CommandResult(0, text, {"rack": t.name, "sheets": list(p.sheets),
                                   "count": len(cols),
                                   "colorings": [[c[s] for s in p.sheets] for c in cols]})


def _load_presentation_lenient(src: str) -> Presentation:
    if src.startswith("corpus:"):
        return load_presentation(src)
    with open(src) as fh:
        return presentation.parse_presentation(fh.read(), check=False)


def cmd_pres_validate(args) -> CommandResult:
    p = _load_presentation_lenient(args.pres)
    problems = presentation.validate(p)
    text = "ok" if not problems else "\n".join(problems)
    return CommandResult(1 if problems else 0, text,
                         {"ok": not problems, "violations": problems})


def cmd_pushoff(args) -> CommandResult:
    d = load_presentation(args.pres)
    overlay, strips = transforms.pushoff(d)
    comments = "".join(
        f"# strip {s.sheet} refines {s.parent} (double relation {s.relation})\n"
        for s in strips.strips)
    text = comments + presentation.serialize_presentation(overlay)
    payload = {"overlay": presentation.serialize_presentation(overlay),
               "strips": [{"relation": s.relation, "sheet": s.sheet, "parent": s.parent}
                          for s in strips.strips]}
    return CommandResult(0, text, payload)


def cmd_numbering(args) -> CommandResult:
    p = load_presentation(args.pres)
    if args.pushoff:
        p, _ = transforms.pushoff(p)
    result = transforms.alexander_numbering(p)
    if isinstance(result, transforms.Numbering):
        text = "consistent\n" + "\n".join(f"{s} {v}" for s, v in result.values.items())
        return CommandResult(0, text, {"consistent": True, "values": result.values})
    ok = transforms.verify_witness(p, result)
    text = f"inconsistent\nwitness walk: {result.describe()}"
    payload = {"consistent": False, "witness_verified": ok,
               "total": result.total,
               "walk": [[s.source, s.target, s.increment] for s in result.walk]}
    return CommandResult(1, text, payload)


def cmd_theorem2(args) -> CommandResult:
    d = load_presentation(args.pres)
    t = load_rack(args.rack)
    report = transforms.theorem2_report(d, t)
    return CommandResult(0 if report.verified else 1, report.format(), report.to_dict())


# --- moves -------------------------------------------------------------------

def cmd_move_verify(args) -> CommandResult:
    m = moves.load_schema(args.schema)
    t = load_rack(args.rack)
    report = moves.verify_move(m, t)
    return CommandResult(0 if report.bijective else 1, report.format(), report.to_dict())


def cmd_move_catalog(args) -> CommandResult:
    schemas = moves.catalog()
    if args.show:
        text = "\n".join(moves.serialize_schema(m) for m in schemas)
    else:
        text = "\n".join(
            f"{m.name}: {len(m.boundary)} boundary germs, "
            f"{len(m.before.sheets)} -> {len(m.after.sheets)} sheets, "
            f"{len(m.before.doubles)} -> {len(m.after.doubles)} double relations"
            for m in schemas)
    payload = [{"name": m.name, "schema": moves.serialize_schema(m)} for m in schemas]
    return CommandResult(0, text, payload)


def cmd_satoh(args) -> CommandResult:
    t = load_rack(args.rack)
    report = moves.satoh_discrimination(t, args.workers)
    return CommandResult(0, report.format(), report.to_dict())


# --- wiring ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--workers", type=int, default=None,
                        help=f"worker processes for counting (default: ${coloring.WORKERS_ENV} "
                             "or the number of CPUs)")

    parser = _Parser(prog="rackcolor",
                     description="Rack and quandle colorings of surface-knot diagrams.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    rack = sub.add_parser("rack", help="inspect finite racks").add_subparsers(
        dest="rack_command", required=True, parser_class=_Parser)
    for name, func, helptext in (
            ("check", cmd_rack_check, "check the rack and quandle axioms"),
            ("kink", cmd_rack_kink, "kink map and its properties"),
            ("assoc", cmd_rack_assoc, "associated quandle"),
            ("components", cmd_rack_components, "connected components")):
        sp = rack.add_parser(name, parents=[common], help=helptext)
        sp.add_argument("src", help=".rack file or builtin:<family>:<n>")
        sp.set_defaults(func=func)
    sp = rack.add_parser("enumerate", parents=[common], help="all racks of order n <= 4")
    sp.add_argument("n", type=int)
    sp.add_argument("--quandles", action="store_true", help="only quandles")
    sp.set_defaults(func=cmd_rack_enumerate)

    sp = sub.add_parser("color", parents=[common], help="count or list colorings")
    sp.add_argument("action", choices=("count", "list"))
    sp.add_argument("pres", help=".pres file or corpus:<name>")
    sp.add_argument("--rack", required=True)
    sp.set_defaults(func=cmd_color)

    pres = sub.add_parser("pres", help="presentation utilities").add_subparsers(
        dest="pres_command", required=True, parser_class=_Parser)
    sp = pres.add_parser("validate", parents=[common])
    sp.add_argument("pres")
    sp.set_defaults(func=cmd_pres_validate)

    sp = sub.add_parser("pushoff", parents=[common], help="push-off overlay of a diagram")
    sp.add_argument("pres")
    sp.set_defaults(func=cmd_pushoff)

    sp = sub.add_parser("numbering", parents=[common], help="Alexander numbering of an overlay")
    sp.add_argument("pres")
    sp.add_argument("--pushoff", action="store_true",
                    help="number the push-off of the given diagram")
    sp.set_defaults(func=cmd_numbering)

    sp = sub.add_parser("theorem2", parents=[common],
                        help="compare colorings by a rack and by its associated quandle")
    sp.add_argument("pres")
    sp.add_argument("--rack", required=True)
    sp.set_defaults(func=cmd_theorem2)

    move = sub.add_parser("move", help="local move invariance").add_subparsers(
        dest="move_command", required=True, parser_class=_Parser)
    sp = move.add_parser("verify", parents=[common])
    sp.add_argument("schema", help="schema file or catalog:<name>")
    sp.add_argument("--rack", required=True)
    sp.set_defaults(func=cmd_move_verify)
    sp = move.add_parser("catalog", parents=[common])
    sp.add_argument("--show", action="store_true", help="print the schema files")
    sp.set_defaults(func=cmd_move_catalog)

    sp = sub.add_parser("satoh", parents=[common],
                        help="separate Satoh's torus diagrams with a rack")
    sp.add_argument("--rack", required=True)
    sp.set_defaults(func=cmd_satoh)
    return parser


def dispatch(argv: Sequence[str]) -> CommandResult:
    fmt = "json" if "json" in _format_values(argv) else "text"
    try:
        args = build_parser().parse_args(list(argv))
        fmt = args.format
        if args.workers is None:
            args.workers = coloring.default_workers()
        result = args.func(args)
    except UsageError as exc:
        result = CommandResult(2, f"usage error: {exc}", {"error": str(exc)})
    except (ValueError, OSError) as exc:
        result = CommandResult(2, f"error: {exc}", {"error": str(exc)})
    result.format = fmt
    return result


def _format_values(argv):
    argv = list(argv)
    return [argv[i + 1] for i, a in enumerate(argv[:-1]) if a == "--format"]


def main(argv: Optional[Sequence[str]] = None) -> int:
    result = dispatch(sys.argv[1:] if argv is None else argv)
    stream = sys.stdout if result.exit_code != 2 else sys.stderr
    stream.write(result.output)
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
