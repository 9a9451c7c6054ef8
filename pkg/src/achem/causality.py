"""Causal structure of a chemistry at and across states.

A molecule g1 is potentially causally linked to g2 through reaction r
when r is feasible and consumes g1 while producing g2.  Per state these
links form a directed multigraph (parallel edges keep their reaction
labels).  Across a run, links chain into potential causal paths: each
step anchors to a later state of the trace than the one before, so a
path has time progression built in even though none of its reactions
needs to have actually executed.
"""

from __future__ import annotations

from dataclasses import dataclass

from .chemistry import ChemistrySpec, ReactionSeq
from .engine import FeasibilityMode, Trace, is_feasible, _require_chemistry
from .errors import BudgetExceededError
from .multiset import Multiset

DEFAULT_PATH_BUDGET = 10_000


@dataclass(frozen=True)
class CausalEdge:
    """One potential causal link, valid at one state."""

    source: str
    target: str
    via: str
    state_index: int


@dataclass(frozen=True)
class ReactionGraph:
    """The multigraph of all causal links feasible at one state.

    ``beyond_support`` lists nodes that only appear as outputs of
    feasible reactions and are absent from the state itself; they are
    included so every edge has both endpoints.
    """

    state_index: int
    nodes: tuple[str, ...]
    edges: tuple[CausalEdge, ...]
    beyond_support: frozenset[str]


def causal_edges(
    state: Multiset,
    spec: ChemistrySpec,
    state_index: int = 0,
    mode: FeasibilityMode = FeasibilityMode.STANDARD,
) -> list[CausalEdge]:
    """All causal links feasible in ``state``.

    Ordered by reaction declaration, then source, then target, so the
    result is deterministic.
    """
    edges = []
    for reaction in spec.reactions:
        if not is_feasible(reaction, state, mode):
            continue
        for source in sorted(reaction.input.support()):
            for target in sorted(reaction.output.support()):
                edges.append(CausalEdge(source, target, reaction.name, state_index))
    return edges


def reaction_graph(
    state: Multiset,
    spec: ChemistrySpec,
    state_index: int = 0,
    mode: FeasibilityMode = FeasibilityMode.STANDARD,
) -> ReactionGraph:
    """Build the potential reaction graph for one state."""
    edges = tuple(causal_edges(state, spec, state_index, mode))
    support = state.support()
    extra = frozenset(e.target for e in edges) - support
    return ReactionGraph(
        state_index=state_index,
        nodes=tuple(sorted(support | extra)),
        edges=edges,
        beyond_support=extra,
    )


@dataclass(frozen=True)
class CausalPath:
    """A chain of causal links across strictly increasing trace states.

    waypoints[i] is consumed and waypoints[i + 1] produced by the i-th
    step's reaction, which is feasible at the step's anchored state.
    """

    waypoints: tuple[str, ...]
    steps: ReactionSeq

    def __post_init__(self):
        if len(self.waypoints) != len(self.steps) + 1:
            raise ValueError("a path has one more waypoint than steps")
        if len(self.steps) == 0:
            raise ValueError("a path has at least one step")

    @property
    def source(self) -> str:
        return self.waypoints[0]

    @property
    def target(self) -> str:
        return self.waypoints[-1]

    @property
    def start_index(self) -> int:
        return self.steps.indices[0]

    @property
    def end_index(self) -> int:
        return self.steps.indices[-1]

    def __str__(self) -> str:
        parts = [self.waypoints[0]]
        for (name, index), waypoint in zip(self.steps.steps, self.waypoints[1:]):
            parts.append(f"={name}@{index}=> {waypoint}")
        return " ".join(parts)


def _feasible_by_state(trace: Trace, mode: FeasibilityMode, lo: int, hi: int):
    """Per state index, the feasible reactions in declaration order."""
    spec = _require_chemistry(trace)
    table: dict[int, list] = {}
    for i in range(lo, hi + 1):
        table[i] = [r for r in spec.reactions if is_feasible(r, trace.states[i], mode)]
    return table


def _resolve_window(trace: Trace, window: tuple[int, int] | None) -> tuple[int, int]:
    if window is None:
        return 0, len(trace.states) - 1
    lo, hi = window
    if not (0 <= lo <= hi < len(trace.states)):
        raise IndexError(f"window [{lo}, {hi}] out of range for trace of {len(trace.states)} states")
    return lo, hi


def causal_paths(
    trace: Trace,
    source: str,
    target: str,
    max_len: int,
    mode: FeasibilityMode = FeasibilityMode.STANDARD,
    window: tuple[int, int] | None = None,
    budget: int = DEFAULT_PATH_BUDGET,
) -> list[CausalPath]:
    """Enumerate every causal path from source to target in the trace.

    Paths have 1..max_len steps anchored at strictly increasing state
    indices inside ``window`` (whole trace by default).  The same
    reaction sequence anchored at different states counts as a different
    path.  Enumeration order is deterministic: anchor index ascending,
    then reaction declaration order, then produced symbol.

    Raises BudgetExceededError rather than silently truncating once more
    than ``budget`` paths exist.
    """
    if max_len < 1:
        raise ValueError("max_len must be at least 1")
    lo, hi = _resolve_window(trace, window)
    feasible = _feasible_by_state(trace, mode, lo, hi)
    found: list[CausalPath] = []

    def extend(symbol: str, next_anchor: int, waypoints: tuple[str, ...], steps: tuple[tuple[str, int], ...]):
        for i in range(next_anchor, hi + 1):
            for reaction in feasible[i]:
                if symbol not in reaction.input:
                    continue
                for produced in sorted(reaction.output.support()):
                    new_steps = steps + ((reaction.name, i),)
                    new_waypoints = waypoints + (produced,)
                    if produced == target:
                        if len(found) >= budget:
                            raise BudgetExceededError(
                                f"more than {budget} causal paths from {source!r} to {target!r}",
                                count=budget,
                            )
                        found.append(CausalPath(new_waypoints, ReactionSeq(new_steps)))
                    if len(new_steps) < max_len:
                        extend(produced, i + 1, new_waypoints, new_steps)

    extend(source, lo, (source,), ())
    return found


def count_pairwise_paths(
    trace: Trace,
    sources: frozenset[str] | set[str],
    targets: frozenset[str] | set[str],
    window: tuple[int, int] | None = None,
    max_len: int = 2,
    mode: FeasibilityMode = FeasibilityMode.STANDARD,
    budget: int = DEFAULT_PATH_BUDGET,
) -> int:
    """Total number of distinct causal paths from ``sources`` into ``targets``.

    Distinctness is by (waypoints, anchored steps).  The count is over
    all ordered pairs, anchored entirely inside ``window``.
    """
    total = 0
    for a in sorted(sources):
        for b in sorted(targets):
            try:
                total += len(causal_paths(trace, a, b, max_len, mode, window, budget - total))
            except BudgetExceededError:
                raise BudgetExceededError(f"more than {budget} pairwise causal paths", count=budget) from None
    return total
