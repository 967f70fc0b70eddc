"""`tasim` command line: distances between timed automata, game solving, region
graphs and qualitative simulation checks.

Exit codes: 0 success, 1 usage, 2 parse error, 3 invalid model, 4 internal limit.
"""

import argparse
import sys

from .games import GameError
from .graphs import LimitExceeded
from .io import ParseError, format_result, parse_automaton, parse_game
from .objectives import ObjectiveSpec, solve
from .regions import RegionGraph, check_well_formed, region_count_bound
from .simdist import METRICS, check_simulation, compute_distance
from .timed import ModelError, scale_automaton

OK, USAGE, PARSE, INVALID, LIMIT = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage; that code means "parse error" here
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}\n{self.format_usage()}")


def _positive(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("alpha must be at least 1")
    return v


def _objective(text):
    try:
        return ObjectiveSpec.parse(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def build_parser():
    p = _Parser(prog="tasim", description="Quantitative simulation distances for timed automata.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    d = sub.add_parser("distance", help="simulation distance of a spec from a refined automaton")
    d.add_argument("--refined", required=True, help="automaton JSON of the refined side")
    d.add_argument("--spec", required=True, help="automaton JSON of the specification side")
    d.add_argument("--metric", required=True, choices=sorted(METRICS))
    d.add_argument("--alpha", type=_positive, default=1, help="time grid 1/alpha (default 1)")
    d.add_argument("--no-zeno", action="store_true",
                   help="diagnostic: do not exclude time-convergent refined runs")
    d.add_argument("--witness", action="store_true", help="print a spec-side strategy")
    d.add_argument("--json", action="store_true", help="machine-readable output")

    s = sub.add_parser("solve", help="solve a weighted game for one objective")
    s.add_argument("--game", required=True, help="game JSON")
    s.add_argument("--objective", required=True, type=_objective,
                   help="e.g. avdl, maxdl:cobuchi, mp, evmaxdiff:cobuchi")
    s.add_argument("--json", action="store_true")

    r = sub.add_parser("regions", help="print the enlarged region graph")
    r.add_argument("automaton", help="automaton JSON")
    r.add_argument("--alpha", type=_positive, default=1)

    c = sub.add_parser("check-sim", help="qualitative untimed simulation check")
    c.add_argument("--refined", required=True)
    c.add_argument("--spec", required=True)
    return p


def _read(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise UsageError(f"tasim: cannot read {path}: {e.strerror}") from None


def _run(args, out):
    if args.command == "distance":
        ar = parse_automaton(_read(args.refined))
        as_ = parse_automaton(_read(args.spec))
        res = compute_distance(ar, as_, args.metric, args.alpha,
                               zeno_check=not args.no_zeno, witness=args.witness)
        print(format_result(res, "json" if args.json else "human"), file=out)
    elif args.command == "solve":
        g = parse_game(_read(args.game))
        vals = solve(g, args.objective)
        print(format_result(vals, "json" if args.json else "human", args.objective), file=out)
    elif args.command == "regions":
        a = scale_automaton(parse_automaton(_read(args.automaton)), args.alpha)
        rg = RegionGraph(a)
        for line in rg.lines():
            print(line, file=out)
        print(f"nodes: {len(rg)} (bound {region_count_bound(a)})", file=out)
        print(f"well-formed: {'yes' if check_well_formed(a, rg) else 'no'}", file=out)
    elif args.command == "check-sim":
        ok = check_simulation(parse_automaton(_read(args.refined)), parse_automaton(_read(args.spec)))
        print("simulates" if ok else "does not simulate", file=out)


def main(argv=None, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        if args.command is None:
            raise UsageError(build_parser().format_help())
        _run(args, out)
    except UsageError as e:
        print(str(e).rstrip(), file=err)
        return USAGE
    except ParseError as e:
        print("parse error: " + "\n  ".join(e.diagnostics), file=err)
        return PARSE
    except ModelError as e:
        print("invalid model: " + "\n  ".join(e.diagnostics), file=err)
        return INVALID
    except GameError as e:
        print(f"invalid game: {e}", file=err)
        return INVALID
    except LimitExceeded as e:
        print(f"limit exceeded: {e}", file=err)
        return LIMIT
    return OK


if __name__ == "__main__":
    sys.exit(main())
