"""Command-line front end.

Exit codes: 0 success, 1 a well-formed yes/no query answered "no",
2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field

from slcs import bisim, checker, model
from slcs.logic import ParseError, parse

OK, FALSE, ERROR = 0, 1, 2


@dataclass
class CommandOutcome:
    exit_code: int
    lines: list[str] = field(default_factory=list)

    @property
    def text(self) -> str:
        return "".join(line + "\n" for line in self.lines)


class _ArgumentError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _ArgumentError(f"{self.prog}: {message}")


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _points(m: model.QDModel, points) -> str:
    return " ".join(m.ordered(points))


def _bool(answer: bool) -> CommandOutcome:
    return CommandOutcome(OK if answer else FALSE, ["true" if answer else "false"])


def to_dot(m: model.QDModel, name: str = "M") -> str:
    """Graphviz text; reflexive loops are implicit and not drawn."""

    def q(s):
        return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'

    lines = [f"digraph {q(name)} {{"]
    for p in m.points:
        label = f"{p} {{{', '.join(sorted(m.props(p)))}}}"
        lines.append(f"  {q(p)} [label={q(label)}];")
    for x, y in sorted(m.edges, key=lambda e: (m.index(e[0]), m.index(e[1]))):
        lines.append(f"  {q(x)} -> {q(y)};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def cmd_check(args) -> CommandOutcome:
    m = model.load_model(args.model)
    return CommandOutcome(OK, [_points(m, checker.sat_set(m, parse(args.formula)))])


def cmd_oracle_check(args) -> CommandOutcome:
    m = model.load_model(args.model)
    sat = checker.oracle_sat_set(m, parse(args.formula), args.bound)
    return CommandOutcome(OK, [_points(m, sat)])


def cmd_bisim(args) -> CommandOutcome:
    m1, m2 = model.load_model(args.left), model.load_model(args.right)
    part = bisim.coarsest_bisimulation(m1, m2, args.variant).partition
    return CommandOutcome(OK, [" ".join(b) for b in part.blocks])


def cmd_bisimilar(args) -> CommandOutcome:
    m1, m2 = model.load_model(args.left), model.load_model(args.right)
    return _bool(bisim.bisimilar(m1, args.x1, m2, args.x2, args.variant))


def cmd_minimize(args) -> CommandOutcome:
    m = model.load_model(args.model)
    q = model.quotient(m, bisim.coarsest_partition(m, args.variant))
    text = model.dump_model(q)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
        return CommandOutcome(OK, [f"wrote {len(q)} points to {args.output}"])
    return CommandOutcome(OK, text.rstrip("\n").split("\n"))


def cmd_props(args) -> CommandOutcome:
    m = model.load_model(args.model)
    sep = model.separation_report(m)
    flags = {
        "t0": sep.t0,
        "t1": sep.t1,
        "connected": model.is_connected(m),
        "topological": model.is_topological(m),
    }
    return CommandOutcome(OK, [" ".join(f"{k}={str(v).lower()}" for k, v in flags.items())])


def _relation(args, m1, m2) -> bisim.PointRelation:
    return bisim.load_relation(args.relation, m1, m2)


def cmd_check_relation(args) -> CommandOutcome:
    m1, m2 = model.load_model(args.left), model.load_model(args.right)
    z = _relation(args, m1, m2)
    v = bisim.find_violation(z, args.variant)
    if v is not None:
        return CommandOutcome(FALSE, ["false", str(v)])
    lines = ["true"]
    if z.is_empty:
        lines.append("note: the relation is empty, so this holds vacuously")
    return CommandOutcome(OK, lines)


def cmd_lift_path(args) -> CommandOutcome:
    m1, m2 = model.load_model(args.left), model.load_model(args.right)
    if args.relation:
        z = _relation(args, m1, m2)
    else:
        z = bisim.coarsest_bisimulation(m1, m2, "converse").relation
    source = checker.Walk(m1, args.walk.split())
    if args.anchor is None:
        match = bisim.lift_path_forward(z, source, args.start)
    else:
        match = bisim.lift_path_anchored(z, source, args.anchor, args.start)
    return CommandOutcome(OK, [" ".join(match.lifted)])


def cmd_verify_ppb(args) -> CommandOutcome:
    m1, m2 = model.load_model(args.left), model.load_model(args.right)
    z = _relation(args, m1, m2)
    v = bisim.find_path_preserving_violation(z, args.max_len)
    if v is not None:
        return CommandOutcome(FALSE, ["false", str(v)])
    return CommandOutcome(OK, ["true"])


def cmd_export_dot(args) -> CommandOutcome:
    m = model.load_model(args.model)
    return CommandOutcome(OK, to_dot(m, args.name).rstrip("\n").split("\n"))


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="slcs", description="SLCS model checking and bisimulation")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def variant(p, default="converse"):
        p.add_argument("--variant", choices=bisim.VARIANTS, default=default)

    p = sub.add_parser("check", help="points satisfying a formula")
    p.add_argument("model")
    p.add_argument("formula")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("oracle-check", help="points satisfying a formula, by walk enumeration")
    p.add_argument("model")
    p.add_argument("formula")
    p.add_argument("--bound", type=_positive, required=True)
    p.set_defaults(func=cmd_oracle_check)

    p = sub.add_parser("bisim", help="blocks of the coarsest bisimulation")
    p.add_argument("left")
    p.add_argument("right")
    variant(p)
    p.set_defaults(func=cmd_bisim)

    p = sub.add_parser("bisimilar", help="are two points bisimilar")
    p.add_argument("left")
    p.add_argument("x1")
    p.add_argument("right")
    p.add_argument("x2")
    variant(p)
    p.set_defaults(func=cmd_bisimilar)

    p = sub.add_parser("minimize", help="quotient by the coarsest bisimulation")
    p.add_argument("model")
    p.add_argument("-o", "--output")
    variant(p)
    p.set_defaults(func=cmd_minimize)

    p = sub.add_parser("props", help="T0, T1, connectedness and transitivity")
    p.add_argument("model")
    p.set_defaults(func=cmd_props)

    p = sub.add_parser("check-relation", help="is a relation a bisimulation")
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("relation")
    variant(p)
    p.set_defaults(func=cmd_check_relation)

    p = sub.add_parser("lift-path", help="lift a walk across a relation")
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("--walk", required=True, help="space-separated points of the left model")
    p.add_argument("--start", required=True, help="right-model point for the anchor index")
    p.add_argument("--anchor", type=int, help="index landing on --start (default: forward lift)")
    p.add_argument("--relation", help="relation JSON (default: coarsest converse bisimulation)")
    p.set_defaults(func=cmd_lift_path)

    p = sub.add_parser("verify-ppb", help="bounded check of the path-preserving conditions")
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("relation")
    p.add_argument("--max-len", type=_positive, default=4)
    p.set_defaults(func=cmd_verify_ppb)

    p = sub.add_parser("export-dot", help="Graphviz rendering of a model")
    p.add_argument("model")
    p.add_argument("--name", default="M")
    p.set_defaults(func=cmd_export_dot)
    return parser


def run(argv: list[str]) -> CommandOutcome:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _ArgumentError as exc:
        return CommandOutcome(ERROR, [f"error: {exc}"])
    except ParseError as exc:
        return CommandOutcome(ERROR, [f"error: formula: {exc}"])
    except (model.ModelError, OSError, json.JSONDecodeError, IndexError) as exc:
        return CommandOutcome(ERROR, [f"error: {exc}"])
    except SystemExit as exc:  # --help
        return CommandOutcome(OK if not exc.code else ERROR)


def main(argv: list[str] | None = None) -> None:
    outcome = run(sys.argv[1:] if argv is None else argv)
    stream = sys.stderr if outcome.exit_code == ERROR else sys.stdout
    stream.write(outcome.text)
    sys.exit(outcome.exit_code)


if __name__ == "__main__":
    main()
