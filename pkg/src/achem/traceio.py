"""Trace persistence and DOT export.

A trace serializes as one JSON object per line with sorted keys, so
files diff cleanly and identical runs produce identical bytes::

    {"state":{"a":1,"f":1},"t":0}
    {"executed":"r1","state":{"a":2},"t":1}

Record 0 carries no "executed" field; every later record names the
reaction that produced it.  The chemistry itself is not embedded, so a
loaded trace must be re-attached to its chemistry before reaction-aware
analysis (Trace.with_chemistry).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import BinaryIO

from .causality import ReactionGraph
from .engine import Trace
from .errors import MalformedRecordError, TraceInvariantError
from .multiset import Multiset


@dataclass(frozen=True)
class TraceRecord:
    """One serialized trace line."""

    t: int
    state: Multiset
    executed: str | None = None


def write_trace(trace: Trace, sink: BinaryIO) -> None:
    """Write a trace as line-delimited JSON records."""
    for t, state in enumerate(trace.states):
        record: dict = {"state": dict(state.items()), "t": t}
        if t > 0:
            record["executed"] = trace.executed[t - 1]
        sink.write(json.dumps(record, sort_keys=True, separators=(",", ":")).encode("utf-8"))
        sink.write(b"\n")


def read_trace(source: BinaryIO) -> Trace:
    """Parse trace records back into a Trace.

    The result carries no chemistry and an unknown termination flag.
    Raises MalformedRecordError for broken records and
    TraceInvariantError for ordering violations, both line-reported.
    """
    states: list[Multiset] = []
    executed: list[str] = []
    expected_t = 0
    for line_no, raw in enumerate(source.read().decode("utf-8").splitlines(), start=1):
        if not raw.strip():
            continue
        try:
            record = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise MalformedRecordError(f"invalid JSON: {exc.msg}", line_no) from None
        if not isinstance(record, dict):
            raise MalformedRecordError("record is not an object", line_no)
        unknown = set(record) - {"t", "state", "executed"}
        if unknown:
            raise MalformedRecordError(f"unknown keys: {sorted(unknown)}", line_no)
        if "t" not in record or "state" not in record:
            raise MalformedRecordError("record needs 't' and 'state'", line_no)
        t = record["t"]
        if not isinstance(t, int):
            raise MalformedRecordError("'t' must be an integer", line_no)
        state_raw = record["state"]
        if not isinstance(state_raw, dict):
            raise MalformedRecordError("'state' must be an object", line_no)
        for symbol, n in state_raw.items():
            if not isinstance(n, int) or isinstance(n, bool) or n <= 0:
                raise MalformedRecordError(
                    f"count of {symbol!r} must be a positive integer, got {n!r}", line_no
                )
        if t != expected_t:
            raise TraceInvariantError(f"expected t={expected_t}, found t={t}", line_no)
        has_executed = "executed" in record
        if t == 0 and has_executed:
            raise TraceInvariantError("record 0 must not carry 'executed'", line_no)
        if t > 0 and not has_executed:
            raise TraceInvariantError(f"record {t} is missing 'executed'", line_no)
        if has_executed and not isinstance(record["executed"], str):
            raise MalformedRecordError("'executed' must be a string", line_no)
        states.append(Multiset(state_raw))
        if has_executed:
            executed.append(record["executed"])
        expected_t += 1
    if not states:
        raise TraceInvariantError("trace stream holds no records", 1)
    return Trace(tuple(states), tuple(executed), terminated=None)


def save_trace(trace: Trace, path: str) -> None:
    with open(path, "wb") as sink:
        write_trace(trace, sink)


def load_trace(path: str) -> Trace:
    with open(path, "rb") as source:
        return read_trace(source)


def export_dot(graph: ReactionGraph) -> str:
    """Render a reaction graph as DOT text.

    One node statement per symbol, one labeled edge statement per causal
    link (parallel edges preserved), deterministic ordering throughout.
    """
    lines = ["digraph reaction_graph {"]
    for node in graph.nodes:
        style = ' [style=dashed]' if node in graph.beyond_support else ""
        lines.append(f'  "{node}"{style};')
    for edge in graph.edges:
        lines.append(f'  "{edge.source}" -> "{edge.target}" [label="{edge.via}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
