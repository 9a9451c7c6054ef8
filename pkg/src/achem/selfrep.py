"""Detecting self-reproducing molecules in a recorded run.

A molecule g is potentially self-reproducing when three things hold at
once for some observationally equivalent partner g':

* observational equivalence - g' counts as "the same" entity under the
  designer-supplied relation (symbol identity plus declared classes);
* reflexive autocatalysis - a causal path leads from g to g', so the
  new copy traces back to g being consumed, not to spontaneous
  appearance of g' by some unrelated route;
* material basis - reproduction is materially grounded: over the window
  a reproducing path spans, the population of g strictly grows while
  some non-empty set X of other participating inputs strictly shrinks.

The material-basis requirement is checked against every discovered path
that exhibits a population increase of g: if even one increasing path
consumes nothing (growth out of thin air), the claim is rejected.
Paths whose window shows no increase are not reproduction events and
are ignored.  All verdicts are bounded claims: they record the path
length cap and the trace window they were computed for.

For runs that settle into a cycle under sequential scheduling, a
potential verdict upgrades to an actual one when a witness path is
feasible inside the cycle and its reactions all execute within one
cycle period: the cycle structure leaves the scheduler no other choice,
so reproduction does not merely become possible, it happens.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace

from .causality import DEFAULT_PATH_BUDGET, CausalPath, causal_paths
from .chemistry import ChemistrySpec, seq_input
from .engine import CycleWitness, FeasibilityMode, SchedulerPolicy, Trace, detect_cycle, simulate, _require_chemistry
from .errors import BudgetExceededError, UnknownSymbolError, WitnessMismatchError


class Status(str, enum.Enum):
    POTENTIAL = "potentially-self-reproducing"
    ACTUAL = "actually-self-reproducing"
    REJECTED = "rejected"
    INCONCLUSIVE = "inconclusive"


class FailureReason(str, enum.Enum):
    NO_EQUIVALENT_PRODUCT = "no-equivalent-product"
    NO_CAUSAL_PATH = "no-causal-path"
    MATERIAL_BASIS_VIOLATED = "material-basis-violated"
    TRIVIAL_CAUSALITY = "trivial-causality"
    BUDGET_EXCEEDED = "budget-exceeded"


@dataclass(frozen=True)
class EquivalenceSpec:
    """Observational equivalence over symbols.

    Symbols are equivalent when identical or members of the same
    declared class; classes must be disjoint, which makes the relation
    an equivalence relation by construction.
    """

    classes: tuple[frozenset[str], ...] = ()

    def __post_init__(self):
        seen: set[str] = set()
        for cls in self.classes:
            if seen & cls:
                raise ValueError("equivalence classes must be disjoint")
            seen |= cls

    @classmethod
    def from_chemistry(cls, spec: ChemistrySpec) -> "EquivalenceSpec":
        return cls(tuple(frozenset(members) for _, members in spec.equivalences))

    def equivalent(self, a: str, b: str) -> bool:
        if a == b:
            return True
        return any(a in cls and b in cls for cls in self.classes)


def equivalent(a: str, b: str, eq: EquivalenceSpec) -> bool:
    return eq.equivalent(a, b)


@dataclass(frozen=True)
class Level0Verdict:
    """Outcome of a self-reproduction check for one molecule."""

    subject: str
    status: Status
    witness_paths: tuple[CausalPath, ...] = ()
    partner: str | None = None
    consumed: frozenset[str] = frozenset()
    failure_reason: FailureReason | None = None
    offending_path: CausalPath | None = None
    max_len: int = 0
    mode: FeasibilityMode = FeasibilityMode.STANDARD

    def to_dict(self) -> dict:
        return {
            "subject": self.subject,
            "status": self.status.value,
            "witness_paths": [str(p) for p in self.witness_paths],
            "partner": self.partner,
            "consumed": sorted(self.consumed),
            "failure_reason": self.failure_reason.value if self.failure_reason else None,
            "offending_path": str(self.offending_path) if self.offending_path else None,
            "max_len": self.max_len,
            "mode": self.mode.value,
        }


def _span(path: CausalPath, trace: Trace) -> tuple[int, int]:
    """The state window a path's execution spans.

    The window opens at the first anchored state and closes one state
    after the last anchored reaction, where that reaction's products
    have materialized (clamped to the recorded horizon).
    """
    start = path.start_index
    end = min(path.end_index + 1, len(trace.states) - 1)
    return start, end


def check_material_basis(path: CausalPath, trace: Trace, subject: str) -> tuple[bool, frozenset[str]]:
    """Does this path witness materially grounded reproduction of ``subject``?

    Returns (True, X) when the population of ``subject`` strictly grows
    over the path's window and X, the non-empty set of other input
    symbols whose population strictly shrinks, exists.  Otherwise
    (False, empty set).
    """
    spec = _require_chemistry(trace)
    if not all(0 <= i < len(trace.states) for i in path.steps.indices):
        raise IndexError("path anchors lie outside the trace")
    start, end = _span(path, trace)
    first, last = trace.states[start], trace.states[end]
    if last[subject] <= first[subject]:
        return False, frozenset()
    participating = seq_input(path.steps, spec).support() - {subject}
    consumed = frozenset(s for s in participating if last[s] < first[s])
    if not consumed:
        return False, frozenset()
    return True, consumed


def detect_selfrep(
    trace: Trace,
    subject: str,
    eq: EquivalenceSpec | None = None,
    max_len: int = 2,
    mode: FeasibilityMode = FeasibilityMode.STANDARD,
    window: tuple[int, int] | None = None,
    path_budget: int = DEFAULT_PATH_BUDGET,
) -> Level0Verdict:
    """Decide whether ``subject`` is potentially self-reproducing in the trace.

    For each equivalent partner, enumerates causal paths subject -> partner
    of up to ``max_len`` steps.  The subject is accepted for a partner when
    at least one path passes the material-basis check and no path shows a
    population increase of the subject without a shrinking input set.  A
    search that overruns ``path_budget`` yields an inconclusive verdict.
    """
    spec = _require_chemistry(trace)
    if subject not in spec.molecules:
        raise UnknownSymbolError(f"unknown molecule {subject!r}")
    eq = eq if eq is not None else EquivalenceSpec.from_chemistry(spec)

    partners = [subject] + sorted(s for s in spec.molecules if s != subject and eq.equivalent(subject, s))
    base = dict(max_len=max_len, mode=mode)

    first_material_failure: Level0Verdict | None = None
    for partner in partners:
        try:
            paths = causal_paths(trace, subject, partner, max_len, mode, window, path_budget)
        except BudgetExceededError:
            return Level0Verdict(
                subject, Status.INCONCLUSIVE, partner=partner,
                failure_reason=FailureReason.BUDGET_EXCEEDED, **base,
            )
        if not paths:
            continue
        passing: list[CausalPath] = []
        consumed: set[str] = set()
        offender: CausalPath | None = None
        for path in paths:
            ok, shrunk = check_material_basis(path, trace, subject)
            if ok:
                passing.append(path)
                consumed |= shrunk
            elif offender is None:
                start, end = _span(path, trace)
                if trace.states[end][subject] > trace.states[start][subject]:
                    offender = path  # grows without consuming anything
        if passing and offender is None:
            return Level0Verdict(
                subject, Status.POTENTIAL,
                witness_paths=tuple(passing), partner=partner,
                consumed=frozenset(consumed), **base,
            )
        if first_material_failure is None:
            first_material_failure = Level0Verdict(
                subject, Status.REJECTED, partner=partner,
                failure_reason=FailureReason.MATERIAL_BASIS_VIOLATED,
                offending_path=offender if offender is not None else paths[0],
                **base,
            )

    if first_material_failure is not None:
        return first_material_failure
    reason = FailureReason.NO_CAUSAL_PATH if partners else FailureReason.NO_EQUIVALENT_PRODUCT
    return Level0Verdict(subject, Status.REJECTED, failure_reason=reason, **base)


def verify_theorem1(
    trace: Trace,
    witness: CycleWitness,
    subject: str,
    eq: EquivalenceSpec | None = None,
    max_len: int = 2,
    mode: FeasibilityMode = FeasibilityMode.STANDARD,
    path_budget: int = DEFAULT_PATH_BUDGET,
) -> Level0Verdict:
    """Upgrade a potential verdict to an actual one on a cyclic run.

    Restricts the search to the recorded cyclic region, then confirms
    that some witness path's reactions all execute within one cycle
    period.  Requires ``witness`` to be exactly what detect_cycle
    reports for this trace and the trace to come from sequential
    scheduling (which the engine guarantees).
    """
    if detect_cycle(trace) != witness:
        raise WitnessMismatchError("the supplied cycle witness does not match the trace")
    n, length = witness.prefix_len, witness.cycle_len
    verdict = detect_selfrep(
        trace, subject, eq, max_len, mode,
        window=(n + 1, len(trace.states) - 1), path_budget=path_budget,
    )
    if verdict.status is not Status.POTENTIAL:
        return verdict
    period = set(trace.executed[n + 1 : n + 1 + length])
    confirmed = tuple(p for p in verdict.witness_paths if set(p.steps.names) <= period)
    if confirmed:
        return replace(verdict, status=Status.ACTUAL, witness_paths=confirmed)
    return verdict


def detect_selfrep_across_policies(
    spec: ChemistrySpec,
    subject: str,
    max_steps: int,
    eq: EquivalenceSpec | None = None,
    max_len: int = 2,
    mode: FeasibilityMode = FeasibilityMode.STANDARD,
    path_budget: int = DEFAULT_PATH_BUDGET,
) -> Level0Verdict:
    """Run both scheduler policies and keep the strongest verdict.

    Approximates quantification over runs: a single scheduler realizes
    only one run per initial state, so sweeping the available policies
    widens the evidence base.  Positive beats inconclusive beats
    rejected; the first policy (declaration order of the enum) wins ties.
    """
    rank = {Status.ACTUAL: 3, Status.POTENTIAL: 2, Status.INCONCLUSIVE: 1, Status.REJECTED: 0}
    best: Level0Verdict | None = None
    for policy in SchedulerPolicy:
        trace = simulate(spec, max_steps, policy, mode)
        cycle = detect_cycle(trace)
        if cycle is not None:
            verdict = verify_theorem1(trace, cycle, subject, eq, max_len, mode, path_budget)
        else:
            verdict = detect_selfrep(trace, subject, eq, max_len, mode, path_budget=path_budget)
        if best is None or rank[verdict.status] > rank[best.status]:
            best = verdict
    assert best is not None
    return best
