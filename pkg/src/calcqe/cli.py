"""Command-line driver: ``calcqe [options] [FILE]`` (standard input when FILE is ``-`` or absent).

``check-sat`` decides the assertions with free constants read existentially;
``eliminate-quantifiers`` treats them as parameters and prints an equivalent
quantifier-free formula.  Exit status: 0 decided, 2 unknown, 1 error.
"""
from __future__ import annotations

import argparse
import sys
from typing import Sequence, TextIO

from .engine import EngineConfig, SolverResult, check_truth, eliminate_quantifiers
from .formula import Exists, NullifiedError, free_variables, prepare
from .implicants import METRICS, MODES
from .smtlib import Script, SmtError, parse, print_formula
from .stats import Stats
from .verify import verify_qe

EXIT_OK, EXIT_ERROR, EXIT_UNKNOWN = 0, 1, 2

__all__ = ["main", "run", "build_parser", "EXIT_OK", "EXIT_ERROR", "EXIT_UNKNOWN"]


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


class _RejectRootFree(argparse.Action):
    def __call__(self, parser, namespace, values, option_string=None):
        parser.error("--no-root-atoms is not supported: solution formulas keep indexed root atoms, "
                     "and rewriting them into plain polynomial constraints is outside this tool")


def build_parser() -> argparse.ArgumentParser:
    p = _ArgumentParser(prog="calcqe", description=__doc__.splitlines()[0])
    p.add_argument("file", nargs="?", default="-", help="SMT-LIB2 script (default: standard input)")
    p.add_argument("--mode", choices=("auto", "check", "qe"), default="auto",
                   help="run every query as check-sat or as eliminate-quantifiers (default: as written)")
    p.add_argument("--boolean", choices=MODES, default="propagate", help="Boolean reasoning for implicants")
    p.add_argument("--selection", choices=METRICS, default="sotd", help="implicant selection metric")
    p.add_argument("--var-order", choices=("max-univariate", "features"), default="max-univariate")
    p.add_argument("--budget", type=int, default=None, help="cap on implicant candidates per decision")
    p.add_argument("--verify", type=int, metavar="N", default=0,
                   help="check a quantifier elimination result at N sampled parameter points")
    p.add_argument("--seed", type=int, default=0, help="seed for the verifier's sampling")
    p.add_argument("--stats", action="store_true", help="print key=value counters after the result")
    p.add_argument("--no-root-atoms", nargs=0, action=_RejectRootFree, help=argparse.SUPPRESS)
    return p


def _config(args: argparse.Namespace, mode: str) -> EngineConfig:
    return EngineConfig(mode=mode, boolean_mode=args.boolean, selection=args.selection,
                        var_order=args.var_order, candidate_budget=args.budget, seed=args.seed)


def _print_stats(stats: Stats, out: TextIO) -> None:
    for line in stats.lines():
        print(line, file=out)
    ratio = stats.used_ratio()
    print(f"used_ratio={'n/a' if ratio is None else f'{ratio:.3f}'}", file=out)


def _diagnostic(reason, problem) -> str:
    if isinstance(reason, NullifiedError):
        return reason.describe(problem.name_map())
    return str(reason)


def run(script: Script, args: argparse.Namespace, out: TextIO | None = None, err: TextIO | None = None) -> int:
    """Execute the first query of ``script``; returns the exit status."""
    out = out or sys.stdout
    err = err or sys.stderr
    queries = script.queries()
    if not queries:
        print("error: the script has no check-sat or eliminate-quantifiers command", file=err)
        return EXIT_ERROR
    if len(queries) > 1:
        print(f"warning: only the first of {len(queries)} queries is executed", file=err)
    kind = queries[0].kind
    if args.mode == "check":
        kind = "check-sat"
    elif args.mode == "qe":
        kind = "eliminate-quantifiers"
    matrix = script.assertions()
    names = script.names
    if kind == "check-sat":
        f = matrix
        for v in sorted(free_variables(f), reverse=True):
            f = Exists(v, f)
        problem = prepare(f, names, args.var_order)
        r = check_truth(problem, _config(args, "check"))
        print(r.result.value, file=out)
        if r.reason is not None:
            print(f"unknown: {_diagnostic(r.reason, problem)}", file=err)
        if args.stats:
            _print_stats(r.stats, out)
        return EXIT_UNKNOWN if r.result is SolverResult.UNKNOWN else EXIT_OK
    problem = prepare(matrix, names, args.var_order)
    config = _config(args, "qe")
    q = eliminate_quantifiers(problem, config)
    if q.result is SolverResult.UNKNOWN:
        print("unknown", file=out)
        print(f"unknown: {_diagnostic(q.reason, problem)}", file=err)
        return EXIT_UNKNOWN
    print(print_formula(q.formula, problem.name_map()), file=out)
    if args.stats:
        _print_stats(q.stats, out)
    if args.verify:
        report = verify_qe(problem, q.formula, args.verify, args.seed, config)
        print(f"verify: {report.summary()}", file=err)
        if not report.passed:
            return EXIT_ERROR
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.file == "-":
            text = sys.stdin.read()
        else:
            with open(args.file, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR
    try:
        script = parse(text)
    except SmtError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR
    return run(script, args)


if __name__ == "__main__":
    sys.exit(main())
