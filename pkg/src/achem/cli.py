"""Command-line interface.

Subcommands::

    simulate <chem> --steps N [--policy P] [--feasibility M] [--out FILE]
    cycle <trace>
    graph <chem> --state <trace:index> --dot FILE
    paths <trace> --chem <chem> --from g --to g2 --max-len L
    selfrep <trace> --chem <chem> --entity g [--max-len L]
    selfrep1 <trace> --chem <chem> --entity "{x,y}" [--caps k=v,...]

Exit codes: 0 success or positive verdict, 1 negative verdict, 2 usage
or parse error, 3 budget exceeded / inconclusive.  Diagnostics go to
stderr only.
"""

from __future__ import annotations

import argparse
import json
import sys

from .causality import causal_paths, reaction_graph
from .chemistry import parse_chemistry
from .engine import FeasibilityMode, SchedulerPolicy, Trace, detect_cycle, simulate
from .errors import AchemError, BudgetExceededError, ParseError, TraceFormatError
from .hierarchy import Caps, detect_selfrep1, level_of, parse_entity
from .selfrep import Status, detect_selfrep, verify_theorem1
from .traceio import export_dot, load_trace, save_trace, write_trace

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_USAGE = 2
EXIT_INCONCLUSIVE = 3

_STATUS_EXIT = {
    Status.POTENTIAL: EXIT_OK,
    Status.ACTUAL: EXIT_OK,
    Status.REJECTED: EXIT_NEGATIVE,
    Status.INCONCLUSIVE: EXIT_INCONCLUSIVE,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # route usage errors through the exit-code contract
        raise _UsageError(message)


class _UsageError(Exception):
    pass


def _build_parser() -> _Parser:
    parser = _Parser(prog="achem", description="artificial chemistry simulation and analysis")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_mode(p):
        p.add_argument("--feasibility", choices=[m.value for m in FeasibilityMode],
                       default=FeasibilityMode.STANDARD.value)

    p = sub.add_parser("simulate", help="run a chemistry and record the trace")
    p.add_argument("chem")
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--policy", choices=[x.value for x in SchedulerPolicy],
                   default=SchedulerPolicy.FIRST_DECLARED.value)
    add_mode(p)
    p.add_argument("--out")

    p = sub.add_parser("cycle", help="detect a confirmed cycle in a trace")
    p.add_argument("trace")

    p = sub.add_parser("graph", help="export the reaction graph at one state as DOT")
    p.add_argument("chem")
    p.add_argument("--state", required=True, metavar="TRACE:INDEX")
    add_mode(p)
    p.add_argument("--dot", required=True)

    p = sub.add_parser("paths", help="enumerate causal paths between two molecules")
    p.add_argument("trace")
    p.add_argument("--chem", required=True)
    p.add_argument("--from", dest="source", required=True)
    p.add_argument("--to", dest="target", required=True)
    p.add_argument("--max-len", type=int, required=True)
    add_mode(p)

    p = sub.add_parser("selfrep", help="self-reproduction verdict for a molecule")
    p.add_argument("trace")
    p.add_argument("--chem", required=True)
    p.add_argument("--entity", required=True)
    p.add_argument("--max-len", type=int, default=2)
    add_mode(p)

    p = sub.add_parser("selfrep1", help="self-reproduction verdict for a set entity")
    p.add_argument("trace")
    p.add_argument("--chem", required=True)
    p.add_argument("--entity", required=True)
    p.add_argument("--caps", default="")
    add_mode(p)

    return parser


def _read_text(path: str) -> str:
    with open(path, "r", encoding="utf-8") as handle:
        return handle.read()


def _load_with_chemistry(trace_path: str, chem_path: str) -> Trace:
    spec = parse_chemistry(_read_text(chem_path))
    return load_trace(trace_path).with_chemistry(spec)


def _parse_caps(text: str) -> Caps:
    if not text.strip():
        return Caps()
    values = {}
    fields = {
        "max-len": "max_len",
        "meta-len": "max_meta_len",
        "chain": "max_chain",
        "candidates": "max_candidates",
        "path-budget": "path_budget",
        "meta-budget": "meta_budget",
    }
    for piece in text.split(","):
        key, _, value = piece.partition("=")
        key = key.strip()
        if key not in fields:
            raise _UsageError(f"unknown cap {key!r} (known: {', '.join(sorted(fields))})")
        try:
            values[fields[key]] = int(value)
        except ValueError:
            raise _UsageError(f"cap {key!r} needs an integer value") from None
    return Caps(**values)


def run_command(argv: list[str]) -> int:
    """Dispatch one command; returns the process exit code."""
    try:
        args = _build_parser().parse_args(argv)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    try:
        return _dispatch(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceededError as exc:
        print(f"inconclusive: {exc}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    except (ParseError, TraceFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (AchemError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def _dispatch(args) -> int:
    mode = FeasibilityMode(getattr(args, "feasibility", FeasibilityMode.STANDARD.value))

    if args.command == "simulate":
        spec = parse_chemistry(_read_text(args.chem))
        trace = simulate(spec, args.steps, SchedulerPolicy(args.policy), mode)
        if args.out:
            save_trace(trace, args.out)
            ending = "halted" if trace.terminated else "step budget exhausted"
            print(f"{len(trace.states)} states, {len(trace.executed)} steps ({ending})")
        else:
            write_trace(trace, sys.stdout.buffer)
        return EXIT_OK

    if args.command == "cycle":
        witness = detect_cycle(load_trace(args.trace))
        if witness is None:
            print("no cycle within recorded horizon")
            return EXIT_NEGATIVE
        print(json.dumps({"prefix_len": witness.prefix_len, "cycle_len": witness.cycle_len}))
        return EXIT_OK

    if args.command == "graph":
        trace_path, _, index_text = args.state.rpartition(":")
        if not trace_path:
            raise _UsageError("--state takes TRACE:INDEX")
        try:
            index = int(index_text)
        except ValueError:
            raise _UsageError(f"state index {index_text!r} is not an integer") from None
        spec = parse_chemistry(_read_text(args.chem))
        trace = load_trace(trace_path)
        if not 0 <= index < len(trace.states):
            raise _UsageError(f"state index {index} outside trace of {len(trace.states)} states")
        graph = reaction_graph(trace.states[index], spec, index, mode)
        with open(args.dot, "w", encoding="utf-8") as handle:
            handle.write(export_dot(graph))
        print(f"wrote {args.dot}: {len(graph.nodes)} nodes, {len(graph.edges)} edges")
        return EXIT_OK

    if args.command == "paths":
        trace = _load_with_chemistry(args.trace, args.chem)
        found = causal_paths(trace, args.source, args.target, args.max_len, mode)
        for path in found:
            print(path)
        print(f"{len(found)} path(s)")
        return EXIT_OK if found else EXIT_NEGATIVE

    if args.command == "selfrep":
        trace = _load_with_chemistry(args.trace, args.chem)
        witness = detect_cycle(trace)
        if witness is not None:
            verdict = verify_theorem1(trace, witness, args.entity, max_len=args.max_len, mode=mode)
        else:
            verdict = detect_selfrep(trace, args.entity, max_len=args.max_len, mode=mode)
        print(json.dumps(verdict.to_dict(), sort_keys=True, indent=2))
        return _STATUS_EXIT[verdict.status]

    if args.command == "selfrep1":
        trace = _load_with_chemistry(args.trace, args.chem)
        entity = parse_entity(args.entity)
        if level_of(entity) != 1:
            raise _UsageError("selfrep1 takes a level-1 entity like '{x, y}'")
        verdict = detect_selfrep1(trace, entity, caps=_parse_caps(args.caps), mode=mode)
        print(json.dumps(verdict.to_dict(), sort_keys=True, indent=2))
        return _STATUS_EXIT[verdict.status]

    raise _UsageError(f"unknown command {args.command!r}")


def main() -> None:
    sys.exit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    main()
