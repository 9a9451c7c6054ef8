"""Deterministic sequential simulation of a chemistry.

Exactly one reaction executes per state transition.  Which one is
decided by a scheduler policy; whether a reaction is allowed to fire is
decided by a feasibility mode.  Both knobs thread through every
downstream analysis so results always name the semantics they were
computed under.

Feasibility modes:

* ``standard`` - a reaction is feasible when the state holds at least
  the required multiplicity of every input symbol.  This is ordinary
  multiset-rewriting feasibility and the default.
* ``strict`` - the state must hold strictly more than the required
  multiplicity of every input, so a reaction that would drain the whole
  stock of an input cannot fire.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace

from .chemistry import ChemistrySpec, Reaction, ReactionSeq
from .errors import InfeasibleReactionError
from .multiset import Multiset


class FeasibilityMode(str, enum.Enum):
    STANDARD = "standard"
    STRICT = "strict"


class SchedulerPolicy(str, enum.Enum):
    FIRST_DECLARED = "first-declared"
    ROUND_ROBIN = "round-robin"


@dataclass(frozen=True)
class Trace:
    """A recorded run: states plus the reaction executed at each step.

    ``executed[i]`` transformed ``states[i]`` into ``states[i + 1]``.
    ``terminated`` is True when the run halted because no feasible
    reaction remained, False when the step budget ran out, and None for
    traces loaded from storage (the flag is not recoverable from the
    record stream).  Equality compares the observable history only:
    states and executed reactions.
    """

    states: tuple[Multiset, ...]
    executed: tuple[str, ...]
    terminated: bool | None = field(default=None, compare=False)
    chemistry: ChemistrySpec | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if not self.states:
            raise ValueError("a trace holds at least the initial state")
        if len(self.executed) != len(self.states) - 1:
            raise ValueError("executed list must have one entry per transition")

    def __len__(self) -> int:
        return len(self.states)

    def with_chemistry(self, spec: ChemistrySpec) -> "Trace":
        return replace(self, chemistry=spec)

    def window(self, start: int, stop: int) -> "Trace":
        """The partial run covering states[start..stop] inclusive."""
        if not (0 <= start <= stop < len(self.states)):
            raise IndexError(f"window [{start}, {stop}] out of range")
        return Trace(
            states=self.states[start : stop + 1],
            executed=self.executed[start:stop],
            terminated=None,
            chemistry=self.chemistry,
        )

    def subsequence(self, indices: tuple[int, ...]) -> tuple[Multiset, ...]:
        """States at a strictly increasing index selection."""
        if any(b <= a for a, b in zip(indices, indices[1:])):
            raise ValueError("subsequence indices must be strictly increasing")
        return tuple(self.states[i] for i in indices)


@dataclass(frozen=True)
class CycleWitness:
    """A confirmed cycle: after ``prefix_len`` states the next
    ``cycle_len`` states repeat for the rest of the recorded trace."""

    prefix_len: int
    cycle_len: int


def is_feasible(reaction: Reaction, state: Multiset, mode: FeasibilityMode = FeasibilityMode.STANDARD) -> bool:
    """Can ``reaction`` fire in ``state`` under the given mode?"""
    if mode is FeasibilityMode.STRICT:
        return all(state[g] > n for g, n in reaction.input.items())
    return all(state[g] >= n for g, n in reaction.input.items())


def is_feasible_seq(seq: ReactionSeq, trace: Trace, mode: FeasibilityMode = FeasibilityMode.STANDARD) -> bool:
    """Is every step's reaction feasible at its anchored state?"""
    spec = _require_chemistry(trace)
    for name, index in seq.steps:
        if not 0 <= index < len(trace.states):
            raise IndexError(f"state index {index} out of range for trace of {len(trace.states)} states")
        if not is_feasible(spec.reaction(name), trace.states[index], mode):
            return False
    return True


def apply(reaction: Reaction, state: Multiset, mode: FeasibilityMode = FeasibilityMode.STANDARD) -> Multiset:
    """Execute one reaction: remove its inputs, add its outputs."""
    if not is_feasible(reaction, state, mode):
        raise InfeasibleReactionError(f"reaction {reaction.name!r} is not feasible in {state!r}")
    return state.subtract(reaction.input).union(reaction.output)


def schedule(
    state: Multiset,
    spec: ChemistrySpec,
    policy: SchedulerPolicy = SchedulerPolicy.FIRST_DECLARED,
    mode: FeasibilityMode = FeasibilityMode.STANDARD,
    previous: str | None = None,
) -> Reaction | None:
    """Pick the reaction to execute in ``state``, or None if none is feasible.

    first-declared: the feasible reaction with the lowest declaration
    index.  round-robin: the first feasible reaction declared strictly
    after the previously executed one, wrapping around (and falling back
    to the previous reaction itself if it is the only feasible one).
    """
    n = len(spec.reactions)
    if n == 0:
        return None
    if policy is SchedulerPolicy.ROUND_ROBIN and previous is not None:
        start = spec.declaration_index(previous) + 1
        order = [(start + k) % n for k in range(n)]
    else:
        order = list(range(n))
    for i in order:
        if is_feasible(spec.reactions[i], state, mode):
            return spec.reactions[i]
    return None


def simulate(
    spec: ChemistrySpec,
    max_steps: int,
    policy: SchedulerPolicy = SchedulerPolicy.FIRST_DECLARED,
    mode: FeasibilityMode = FeasibilityMode.STANDARD,
) -> Trace:
    """Run the chemistry from its initial population.

    Executes one scheduled reaction per step until nothing is feasible
    (terminated=True) or ``max_steps`` transitions happened
    (terminated=False).
    """
    if max_steps < 1:
        raise ValueError("max_steps must be at least 1")
    states = [spec.initial]
    executed: list[str] = []
    previous: str | None = None
    terminated = False
    for _ in range(max_steps):
        reaction = schedule(states[-1], spec, policy, mode, previous)
        if reaction is None:
            terminated = True
            break
        states.append(apply(reaction, states[-1], mode))
        executed.append(reaction.name)
        previous = reaction.name
    return Trace(tuple(states), tuple(executed), terminated, chemistry=spec)


def detect_cycle(trace: Trace) -> CycleWitness | None:
    """Find the minimal confirmed cycle in a recorded trace.

    Returns the witness with the smallest cycle length (and, for that
    length, the smallest prefix) such that every recorded state past the
    prefix repeats the cycle.  Confirmation requires the cycle to appear
    at least twice in the record; None means no cycle was confirmed
    within the recorded horizon, never that the run is acyclic.
    """
    encoded = [s.canonical_encode() for s in trace.states]
    n_states = len(encoded)
    for cycle_len in range(1, (n_states - 1) // 2 + 1):
        for prefix in range(0, n_states - 2 * cycle_len):
            base = prefix + 1
            if all(
                encoded[i] == encoded[base + (i - base) % cycle_len]
                for i in range(base + cycle_len, n_states)
            ):
                return CycleWitness(prefix, cycle_len)
    return None


def _require_chemistry(trace: Trace) -> ChemistrySpec:
    from .errors import MissingChemistryError

    if trace.chemistry is None:
        raise MissingChemistryError(
            "this operation needs the trace's chemistry; attach one with Trace.with_chemistry"
        )
    return trace.chemistry
