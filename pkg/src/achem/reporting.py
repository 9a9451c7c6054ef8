"""Verdict reports and the end-to-end analysis pipeline.

A report bundles the verdicts of an analysis run with the fingerprint
of the chemistry source that produced them, so results can never be
detached from their chemistry, plus every parameter the verdicts are
relative to.  Serialization is deterministic: identical inputs give
byte-identical reports.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass

from .chemistry import parse_chemistry
from .engine import FeasibilityMode, SchedulerPolicy, Trace, detect_cycle, simulate
from .selfrep import EquivalenceSpec, detect_selfrep, verify_theorem1


@dataclass(frozen=True)
class ReportDocument:
    """Verdicts plus provenance: chemistry fingerprint and parameters."""

    fingerprint: str
    parameters: dict
    verdicts: tuple[dict, ...]

    def to_json(self) -> str:
        payload = {
            "fingerprint": self.fingerprint,
            "parameters": self.parameters,
            "verdicts": list(self.verdicts),
        }
        return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def fingerprint_text(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def selfrep_sweep(
    trace: Trace,
    chem_text: str,
    max_len: int = 1,
    mode: FeasibilityMode = FeasibilityMode.STANDARD,
    path_budget: int = 10_000,
) -> ReportDocument:
    """Self-reproduction verdicts for every declared molecule.

    Cycle-aware: when the trace is confirmed cyclic, each molecule goes
    through the actual-reproduction check, otherwise through the
    potential one.  Molecules are processed in sorted order and budget
    overruns surface as inconclusive verdicts, so the report is a pure
    function of its inputs.
    """
    assert trace.chemistry is not None
    spec = trace.chemistry
    eq = EquivalenceSpec.from_chemistry(spec)
    cycle = detect_cycle(trace)
    verdicts = []
    for molecule in sorted(spec.molecules):
        if cycle is not None:
            verdict = verify_theorem1(trace, cycle, molecule, eq, max_len, mode, path_budget)
        else:
            verdict = detect_selfrep(trace, molecule, eq, max_len, mode, path_budget=path_budget)
        verdicts.append(verdict.to_dict())
    parameters = {
        "analysis": "selfrep-sweep",
        "cycle": {"prefix_len": cycle.prefix_len, "cycle_len": cycle.cycle_len} if cycle else None,
        "max_len": max_len,
        "mode": mode.value,
        "path_budget": path_budget,
        "trace_length": len(trace.states),
    }
    return ReportDocument(fingerprint_text(chem_text), parameters, tuple(verdicts))


def run_pipeline(
    chem_text: str,
    max_steps: int,
    policy: SchedulerPolicy = SchedulerPolicy.FIRST_DECLARED,
    mode: FeasibilityMode = FeasibilityMode.STANDARD,
    max_len: int = 1,
    path_budget: int = 10_000,
) -> str:
    """parse -> simulate -> sweep -> report, returning the report text."""
    spec = parse_chemistry(chem_text)
    trace = simulate(spec, max_steps, policy, mode)
    report = selfrep_sweep(trace, chem_text, max_len, mode, path_budget)
    parameters = dict(report.parameters)
    parameters.update({"max_steps": max_steps, "policy": policy.value})
    return ReportDocument(report.fingerprint, parameters, report.verdicts).to_json()
