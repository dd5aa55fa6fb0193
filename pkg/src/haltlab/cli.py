"""Command line front end.

Subcommands: run, race, totalize, beta (fit / eval / consistent), measure,
classify, superpose, predict.  Exit status 0 means a definite result, 2
means the budget ran out first (budget-exhausted run, all-exhausted race,
unresolved totalization or measurement), 1 means a usage or parse error.

Output is line-oriented text; tables are tab-separated.  --format tsv
drops the '#'-prefixed column-header lines, nothing else.  --plot renders
the same data as a figure next to the text (predict, superpose, race).
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from . import dovetail, godel, proofs, universe
from .guard import guarded_run
from .machine import (
    BudgetExhausted,
    Halted,
    MachineError,
    SelfTerminated,
    canonicalize,
    load_machine,
)

DEFAULT_BUDGET = 100_000


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _build_parser() -> _Parser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                        help="step budget (default %(default)s)")
    common.add_argument("--seed", type=int, default=None,
                        help="seed for random corpus generators")
    common.add_argument("--trace", metavar="PATH",
                        help="write a step or round trace to PATH")
    common.add_argument("--format", choices=("text", "tsv"), default="text",
                        help="table style: text keeps header comments, tsv drops them")
    common.add_argument("--plot", metavar="PATH",
                        help="also render a figure to PATH (predict, superpose, race)")

    parser = _Parser(prog="haltlab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("run", parents=[common], help="run one machine under the repeat guard")
    p.add_argument("machine", help="machine file")
    p.add_argument("--input", default="", help="initial tape text (default empty)")

    p = sub.add_parser("race", parents=[common], help="dovetail several machines")
    p.add_argument("machines", nargs="+", help="machine files; all start on empty tape")

    p = sub.add_parser("totalize", parents=[common],
                       help="race T1/T2/T3 for the least zero of g")
    p.add_argument("--g", dest="g_id", help=f"builtin g: {', '.join(sorted(dovetail.BUILTIN_G))}")
    p.add_argument("--g-machine", dest="g_machine", metavar="FILE",
                   help="machine computing g on unary input")
    p.add_argument("--args", default="", help="comma-separated naturals")

    p = sub.add_parser("beta", parents=[common], help="sequence codec")
    beta_sub = p.add_subparsers(dest="beta_command", required=True, parser_class=_Parser)
    q = beta_sub.add_parser("fit", parents=[common], help="fit (b, c) to a sequence file")
    q.add_argument("seqfile", help="whitespace-separated naturals, # comments")
    q = beta_sub.add_parser("eval", parents=[common], help="evaluate one position")
    q.add_argument("--b", type=int, required=True)
    q.add_argument("--c", type=int, required=True)
    q.add_argument("--i", type=int, required=True)
    q = beta_sub.add_parser("consistent", parents=[common],
                            help="all (b, c) in the box matching a sequence")
    q.add_argument("seqfile")
    q.add_argument("--bound", type=int, required=True)

    p = sub.add_parser("measure", parents=[common], help="measure a property at an instant")
    p.add_argument("table", help="property table file")
    p.add_argument("--k", type=int, required=True, help="property code")
    p.add_argument("--t", type=int, required=True, help="instant")

    p = sub.add_parser("classify", parents=[common],
                       help="deterministic or random, from the trailing window")
    p.add_argument("log", help="measurement log file")
    p.add_argument("--window", type=int, default=4)

    p = sub.add_parser("superpose", parents=[common], help="merge two logs")
    p.add_argument("log_a")
    p.add_argument("log_b")
    p.add_argument("--compare", action="store_true",
                   help="also report next-value estimates for merged and parts")
    p.add_argument("--bound", type=int, default=40, help="box bound for --compare")

    p = sub.add_parser("predict", parents=[common], help="next-value estimate for a log")
    p.add_argument("log")
    p.add_argument("--bound", type=int, required=True)

    return parser


def _read_sequence(path: str) -> list[int]:
    values = []
    for no, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0]
        for tok in line.split():
            try:
                values.append(int(tok))
            except ValueError:
                raise godel.CodecError(f"line {no}: not a natural: {tok!r}")
    return values


def _print_distribution(counts: dict[int, int], fmt: str, out) -> None:
    """Rows m<TAB>count<TAB>probability, by falling probability then rising m."""
    if fmt == "text":
        out.write("# m\tcount\tprobability\n")
    if not counts:
        if fmt == "text":
            out.write("# empty consistent set\n")
        return
    total = sum(counts.values())
    rows = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    for m, count in rows:
        out.write(f"{m}\t{count}\t{float(Fraction(count, total)):.12g}\n")


def _cmd_run(args) -> int:
    spec = load_machine(args.machine)
    sink = open(args.trace, "w") if args.trace else None
    try:
        out = guarded_run(spec, args.input, args.budget, trace=sink)
    finally:
        if sink:
            sink.close()
    if isinstance(out, Halted):
        _state, cells, off = canonicalize(out.final)
        print(f"HALTED steps={out.steps} tape={cells} head={off}")
        return 0
    if isinstance(out, SelfTerminated):
        print(f"SELF-TERMINATED cycle_entry={out.cycle_entry_step} period={out.period}")
        return 0
    print(f"BUDGET-EXHAUSTED steps={out.steps}")
    return 2


def _cmd_race(args) -> int:
    specs = [load_machine(m) for m in args.machines]
    entries = [(s, "") for s in specs]
    sink = open(args.trace, "w") if args.trace else None
    rounds = []
    on_round = None
    if args.plot:
        on_round = lambda no, racers: rounds.append([(r.status, r.steps) for r in racers])
    try:
        out = dovetail.race(entries, args.budget, trace=sink, on_round=on_round)
    finally:
        if sink:
            sink.close()
    if args.plot:
        from . import report
        report.save_race_figure(rounds, [s.name for s in specs], args.plot)
    if isinstance(out, dovetail.AllExhausted):
        print(f"ALL-EXHAUSTED global_steps={out.global_steps}")
        return 2
    resolution = "HALTED" if out.resolution == dovetail.HALTED else "SELF-TERMINATED"
    print(f"WINNER machine={out.winner} resolution={resolution} "
          f"local_steps={out.winner_local_steps} global_steps={out.global_steps}")
    return 0


def _cmd_totalize(args) -> int:
    arg_values = tuple(int(x) for x in args.args.split(",") if x.strip() != "")
    if args.g_machine:
        spec = load_machine(args.g_machine)
        problem = dovetail.MuProblem(spec, len(arg_values), arg_values)
        certifier = dovetail.ExhaustiveInstanceCertifier(lambda y: False, cap=1)
    elif args.g_id:
        problem = dovetail.builtin_problem(args.g_id, arg_values)
        certifier = dovetail.default_certifier(problem)
    else:
        raise dovetail.DovetailError("pass --g or --g-machine")
    sink = open(args.trace, "w") if args.trace else None
    try:
        out = dovetail.totalize_mu(problem, certifier, args.budget, trace=sink)
    finally:
        if sink:
            sink.close()
    if isinstance(out, dovetail.Defined):
        print(f"DEFINED y={out.y} via={out.via}")
        return 0
    if isinstance(out, dovetail.DefaultTotal):
        print(f"DEFAULT-TOTAL value={out.value} via={out.via}")
        return 0
    print(f"UNRESOLVED global_steps={out.global_steps}")
    return 2


def _cmd_beta(args) -> int:
    if args.beta_command == "eval":
        print(godel.beta_value(args.b, args.c, args.i))
        return 0
    seq = _read_sequence(args.seqfile)
    if args.beta_command == "fit":
        params = godel.beta_fit(seq)
        print(f"b={params.b} c={params.c} n={params.fitted_len}")
        return 0
    pairs = godel.beta_enumerate_consistent(seq, args.bound)
    if args.format == "text":
        print("# b\tc")
    for b, c in pairs:
        print(f"{b}\t{c}")
    return 0


def _cmd_measure(args) -> int:
    table = universe.load_table(args.table)
    out = universe.measure(table, args.k, args.t, args.budget)
    if isinstance(out, universe.Value):
        print(f"VALUE m={out.m}")
        return 0
    if isinstance(out, universe.UndefinedHolds):
        print("UNDEFINED-HOLDS")
        return 0
    print(f"UNRESOLVED budget={out.budget}")
    return 2


def _cmd_classify(args) -> int:
    log = universe.load_log(args.log)
    print(universe.classify_property(log, args.window).upper())
    return 0


def _cmd_superpose(args) -> int:
    log_a = universe.load_log(args.log_a)
    log_b = universe.load_log(args.log_b)
    merged = universe.merge_logs(log_a, log_b)
    sys.stdout.write(universe.format_log(merged))
    if not args.compare:
        return 0
    sections = [("merged", merged), ("component-a", log_a), ("component-b", log_b)]
    rendered = []
    for label, log in sections:
        counts = universe.next_value_counts(log, args.bound)
        pairs = len(universe.consistent_pairs(log, args.bound))
        print(f"# {label} n={len(log.records)} pairs={pairs}")
        _print_distribution(counts, args.format, sys.stdout)
        rendered.append((label, universe.predict_next(log, args.bound)))
    if args.plot:
        from . import report
        report.save_comparison_figure(rendered, args.plot)
    return 0


def _cmd_predict(args) -> int:
    log = universe.load_log(args.log)
    counts = universe.next_value_counts(log, args.bound)
    _print_distribution(counts, args.format, sys.stdout)
    if args.plot:
        from . import report
        report.save_prediction_figure(universe.predict_next(log, args.bound), args.plot)
    return 0


_HANDLERS = {
    "run": _cmd_run,
    "race": _cmd_race,
    "totalize": _cmd_totalize,
    "beta": _cmd_beta,
    "measure": _cmd_measure,
    "classify": _cmd_classify,
    "superpose": _cmd_superpose,
    "predict": _cmd_predict,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 1
    try:
        return _HANDLERS[args.command](args)
    except (MachineError, godel.CodecError, universe.UniverseError,
            dovetail.DovetailError, proofs.ProofError, OSError) as exc:
        print(f"haltlab: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
