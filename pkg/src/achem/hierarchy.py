"""Higher organizational levels: hierarchical entities and meta reactions.

Level-0 entities are molecule symbols.  A level-n entity (n >= 1) is a
finite set of more than one lower-level entity, at least one of which
sits exactly one level below.  Detection machinery is implemented for
level 1; the entity type itself nests to any depth.

A meta reaction is a feasible reaction sequence in which a level-1
entity takes part: every step consumes at least one of its members.
The sequence's net production (outputs minus inputs, truncated) is what
it makes available; another entity is causally reachable through the
meta reaction when all its members appear in that net production.

Set-level causality is easy to fake: three unrelated rules each copying
one member make the member-wise collection look like a reproducing
whole.  The non-triviality constraint filters that out by counting
member-to-member causal paths; only when they strictly outnumber the
target's cardinality is some target member fed by more than one source,
i.e. the set is connected as a network rather than as a bundle of
independent lines.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from itertools import combinations

from .causality import count_pairwise_paths
from .chemistry import ChemistrySpec, ReactionSeq, seq_input, seq_output
from .engine import FeasibilityMode, Trace, is_feasible, _require_chemistry
from .errors import BudgetExceededError, MalformedEntityError, UnknownSymbolError
from .selfrep import EquivalenceSpec, FailureReason, Status


class HierEntity:
    """A hierarchical set entity; members are symbols or lower entities."""

    __slots__ = ("members", "_level")

    def __init__(self, members):
        members = frozenset(members)
        if len(members) < 2:
            raise MalformedEntityError("an entity above level 0 needs more than one member")
        object.__setattr__(self, "members", members)
        object.__setattr__(self, "_level", 1 + max(level_of(m) for m in members))

    def __setattr__(self, name, value):
        raise AttributeError("HierEntity is immutable")

    @property
    def level(self) -> int:
        return self._level

    def symbols(self) -> frozenset[str]:
        """All level-0 symbols reachable anywhere inside the entity."""
        out: set[str] = set()
        for m in self.members:
            if isinstance(m, str):
                out.add(m)
            else:
                out |= m.symbols()
        return frozenset(out)

    def __eq__(self, other) -> bool:
        if not isinstance(other, HierEntity):
            return NotImplemented
        return self.members == other.members

    def __hash__(self) -> int:
        return hash(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(_sorted_members(self.members))

    def __repr__(self) -> str:
        return format_entity(self)


def _sorted_members(members):
    return sorted(members, key=lambda m: (0, m) if isinstance(m, str) else (1, format_entity(m)))


def level_of(entity) -> int:
    """0 for a symbol, 1 + the deepest member level otherwise."""
    if isinstance(entity, str):
        return 0
    if isinstance(entity, HierEntity):
        return entity.level
    raise MalformedEntityError(f"not an entity: {entity!r}")


def format_entity(entity) -> str:
    """Nested-brace notation: {x, y} or {{a, b}, c}."""
    if isinstance(entity, str):
        return entity
    inner = ", ".join(format_entity(m) for m in _sorted_members(entity.members))
    return "{" + inner + "}"


def parse_entity(text: str):
    """Parse nested-brace entity notation; a bare symbol is level 0."""
    tokens = _tokenize_entity(text)
    entity, pos = _parse_entity_tokens(tokens, 0)
    if pos != len(tokens):
        raise MalformedEntityError(f"trailing input in entity literal: {text!r}")
    return entity


def _tokenize_entity(text: str) -> list[str]:
    tokens: list[str] = []
    i = 0
    while i < len(text):
        c = text[i]
        if c.isspace():
            i += 1
        elif c in "{},":
            tokens.append(c)
            i += 1
        else:
            j = i
            while j < len(text) and text[j] not in "{}," and not text[j].isspace():
                j += 1
            tokens.append(text[i:j])
            i = j
    return tokens


def _parse_entity_tokens(tokens: list[str], pos: int):
    if pos >= len(tokens):
        raise MalformedEntityError("unexpected end of entity literal")
    if tokens[pos] != "{":
        return tokens[pos], pos + 1
    pos += 1
    members = []
    while True:
        if pos >= len(tokens):
            raise MalformedEntityError("unbalanced '{' in entity literal")
        if tokens[pos] == "}":
            return HierEntity(members), pos + 1
        member, pos = _parse_entity_tokens(tokens, pos)
        members.append(member)
        if pos < len(tokens) and tokens[pos] == ",":
            pos += 1


def enumerate_level1(symbols, size_cap: int, budget: int = 10_000) -> list[HierEntity]:
    """All level-1 entities over ``symbols`` with 2..size_cap members.

    Deterministic lexicographic order.  When the total would exceed
    ``budget``, nothing partial is produced: the error reports the count.
    """
    if size_cap < 2:
        raise ValueError("size_cap must be at least 2")
    pool = sorted(symbols)
    top = min(size_cap, len(pool))
    total = sum(math.comb(len(pool), k) for k in range(2, top + 1))
    if total > budget:
        raise BudgetExceededError(f"{total} level-1 entities exceed the budget of {budget}", count=total)
    out: list[HierEntity] = []
    for k in range(2, top + 1):
        for combo in combinations(pool, k):
            out.append(HierEntity(combo))
    return out


@dataclass(frozen=True)
class MetaReaction:
    """One level-1 reaction: an anchored feasible reaction sequence."""

    steps: ReactionSeq

    def __post_init__(self):
        if len(self.steps) == 0:
            raise ValueError("a meta reaction has at least one step")

    @property
    def first_index(self) -> int:
        return self.steps.indices[0]

    @property
    def last_index(self) -> int:
        return self.steps.indices[-1]

    def __len__(self) -> int:
        return len(self.steps)

    def __str__(self) -> str:
        return "<" + ", ".join(f"{name}@{i}" for name, i in self.steps.steps) + ">"


def takes_part(entity: HierEntity, meta: MetaReaction, spec: ChemistrySpec) -> bool:
    """Does every step of the meta reaction consume a member of the entity?"""
    _require_level1(entity)
    members = entity.members
    return all(spec.reaction(name).input.support() & members for name in meta.steps.names)


def net_production(meta: MetaReaction, spec: ChemistrySpec) -> frozenset[str]:
    """Support of outputs minus inputs (truncated) over the whole sequence."""
    return seq_output(meta.steps, spec).subtract(seq_input(meta.steps, spec)).support()


def level1_causal(entity: HierEntity, meta: MetaReaction, other: HierEntity, spec: ChemistrySpec) -> bool:
    """Is ``other`` causally reachable from ``entity`` through ``meta``?

    True when ``entity`` takes part in the meta reaction and every
    member of ``other`` appears in its net production.
    """
    _require_level1(entity)
    _require_level1(other)
    return takes_part(entity, meta, spec) and other.members <= net_production(meta, spec)


def temporally_precedes(first: MetaReaction, second: MetaReaction, trace: Trace) -> bool:
    """Strict temporal order between two meta reactions.

    The first must start and finish strictly before the second starts
    and finishes, and the combined anchors must pack into a window no
    wider than the two sequences laid end to end (interleaving allowed,
    arbitrary gaps not).
    """
    for i in first.steps.indices + second.steps.indices:
        if not 0 <= i < len(trace.states):
            raise IndexError(f"anchor {i} outside the trace")
    if not (first.first_index < second.first_index and first.last_index < second.last_index):
        return False
    anchors = first.steps.indices + second.steps.indices
    span = max(anchors) - min(anchors) + 1
    m, n = len(first), len(second)
    return max(m, n) <= span <= m + n


def is_nontrivial(
    entity: HierEntity,
    other: HierEntity,
    metas: list[MetaReaction] | tuple[MetaReaction, ...],
    trace: Trace,
    max_len: int = 2,
    mode: FeasibilityMode = FeasibilityMode.STANDARD,
    budget: int = 10_000,
) -> tuple[bool, int, int]:
    """Apply the non-triviality constraint to a causal claim.

    Counts member-to-member causal paths inside the window the meta
    reactions span, and demands strictly more of them than ``other``
    has members.  Returns (verdict, counted, threshold).
    """
    _require_level1(entity)
    _require_level1(other)
    if not metas:
        raise ValueError("at least one meta reaction is required")
    anchors = [i for meta in metas for i in meta.steps.indices]
    window = (min(anchors), max(anchors))
    counted = count_pairwise_paths(trace, entity.members, other.members, window, max_len, mode, budget)
    threshold = len(other)
    return counted > threshold, counted, threshold


def _require_level1(entity) -> None:
    if level_of(entity) != 1:
        raise MalformedEntityError(f"expected a level-1 entity, got level {level_of(entity)}")


# ---------------------------------------------------------------------------
# Level-1 self-reproduction detection
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Caps:
    """Search bounds for level-1 detection; every claim is relative to these."""

    max_len: int = 2            # level-0 path length for non-triviality counting
    max_meta_len: int = 4       # steps per meta reaction
    max_chain: int = 1          # meta reactions per level-1 causal path
    max_candidates: int = 10_000
    path_budget: int = 10_000
    meta_budget: int = 10_000

    def to_dict(self) -> dict:
        return {
            "max_len": self.max_len,
            "max_meta_len": self.max_meta_len,
            "max_chain": self.max_chain,
            "max_candidates": self.max_candidates,
            "path_budget": self.path_budget,
            "meta_budget": self.meta_budget,
        }


@dataclass(frozen=True)
class Level1Verdict:
    """Outcome of a self-reproduction check for a level-1 entity."""

    subject: HierEntity
    status: Status
    witness: tuple[MetaReaction, ...] = ()
    partner: HierEntity | None = None
    matching: tuple[tuple[str, str], ...] | None = None
    nontriviality_margin: tuple[int, int] | None = None
    copies: tuple[int, int] | None = None
    consumed: frozenset[str] = frozenset()
    failure_reason: FailureReason | None = None
    caps: Caps = field(default_factory=Caps)
    mode: FeasibilityMode = FeasibilityMode.STANDARD

    def to_dict(self) -> dict:
        return {
            "subject": format_entity(self.subject),
            "status": self.status.value,
            "witness": [str(m) for m in self.witness],
            "partner": format_entity(self.partner) if self.partner else None,
            "matching": [list(pair) for pair in self.matching] if self.matching else None,
            "nontriviality_margin": list(self.nontriviality_margin) if self.nontriviality_margin else None,
            "copies": list(self.copies) if self.copies else None,
            "consumed": sorted(self.consumed),
            "failure_reason": self.failure_reason.value if self.failure_reason else None,
            "caps": self.caps.to_dict(),
            "mode": self.mode.value,
        }


def copy_count(entity: HierEntity, state) -> int:
    """Complete instantiations of the entity in a state: min member count."""
    return min(state[m] for m in sorted(entity.members))


def perfect_matching(left, right, eq: EquivalenceSpec) -> tuple[tuple[str, str], ...] | None:
    """A one-to-one pairing of left onto right under the equivalence, or None.

    Standard augmenting-path bipartite matching; deterministic because
    both sides are visited in sorted order.
    """
    left = sorted(left)
    right = sorted(right)
    if len(left) != len(right):
        return None
    matched: dict[str, str] = {}  # right -> left

    def assign(u: str, visited: set[str]) -> bool:
        for v in right:
            if v in visited or not eq.equivalent(u, v):
                continue
            visited.add(v)
            if v not in matched or assign(matched[v], visited):
                matched[v] = u
                return True
        return False

    for u in left:
        if not assign(u, set()):
            return None
    return tuple(sorted((u, v) for v, u in matched.items()))


def _enumerate_metas(
    trace: Trace,
    entity: HierEntity,
    caps: Caps,
    mode: FeasibilityMode,
    start: int = 0,
) -> list[MetaReaction]:
    """Every anchored feasible sequence the entity takes part in.

    Bounded by caps.max_meta_len steps and caps.meta_budget sequences;
    anchors start at ``start`` and increase strictly.
    """
    spec = _require_chemistry(trace)
    members = entity.members
    usable = [r for r in spec.reactions if r.input.support() & members]
    found: list[MetaReaction] = []

    def extend(next_anchor: int, steps: tuple[tuple[str, int], ...]):
        for i in range(next_anchor, len(trace.states)):
            for reaction in usable:
                if not is_feasible(reaction, trace.states[i], mode):
                    continue
                new_steps = steps + ((reaction.name, i),)
                if len(found) >= caps.meta_budget:
                    raise BudgetExceededError(
                        f"more than {caps.meta_budget} meta reactions", count=caps.meta_budget
                    )
                found.append(MetaReaction(ReactionSeq(new_steps)))
                if len(new_steps) < caps.max_meta_len:
                    extend(i + 1, new_steps)

    extend(start, ())
    return found


def _enumerate_chains(trace: Trace, entity: HierEntity, target: frozenset[str], caps: Caps, mode: FeasibilityMode):
    """Level-1 causal paths from ``entity`` to an entity with members ``target``.

    A chain is a list of meta reactions, consecutive ones temporally
    ordered, stepping through intermediate entities.  The intermediate
    after a meta reaction is its full net production (the most permissive
    choice: any usable intermediate is a subset of it).
    """
    spec = _require_chemistry(trace)
    chains: list[tuple[MetaReaction, ...]] = []

    def extend(current: HierEntity, chain: tuple[MetaReaction, ...]):
        for meta in _enumerate_metas(trace, current, caps, mode):
            if chain and not temporally_precedes(chain[-1], meta, trace):
                continue
            produced = net_production(meta, spec)
            new_chain = chain + (meta,)
            if target <= produced:
                chains.append(new_chain)
            if len(new_chain) < caps.max_chain and len(produced) >= 2:
                extend(HierEntity(produced), new_chain)

    extend(entity, ())
    return chains


def _chain_window(chain: tuple[MetaReaction, ...], trace: Trace) -> tuple[int, int]:
    anchors = [i for meta in chain for i in meta.steps.indices]
    return min(anchors), min(max(anchors) + 1, len(trace.states) - 1)


def detect_selfrep1(
    trace: Trace,
    entity: HierEntity,
    eq: EquivalenceSpec | None = None,
    caps: Caps | None = None,
    mode: FeasibilityMode = FeasibilityMode.STANDARD,
) -> Level1Verdict:
    """Decide whether a level-1 entity is potentially self-reproducing.

    Candidate partners are same-size symbol sets drawn from the trace's
    states and from the outputs of feasible reactions, filtered to those
    with a one-to-one member equivalence to the subject.  A partner is
    reached through non-trivial level-1 causal paths only; among those,
    every chain whose window shows a copy-count increase of the subject
    must also strictly deplete some participating non-member symbol.
    """
    spec = _require_chemistry(trace)
    _require_level1(entity)
    caps = caps if caps is not None else Caps()
    eq = eq if eq is not None else EquivalenceSpec.from_chemistry(spec)
    for sym in sorted(entity.members):
        if sym not in spec.molecules:
            raise UnknownSymbolError(f"unknown molecule {sym!r}")
    base = dict(caps=caps, mode=mode)

    pool: set[str] = set()
    for state in trace.states:
        pool |= state.support()
    for state in trace.states:
        for reaction in spec.reactions:
            if is_feasible(reaction, state, mode):
                pool |= reaction.output.support()

    k = len(entity)
    if math.comb(len(pool), k) > caps.max_candidates:
        return Level1Verdict(entity, Status.INCONCLUSIVE,
                             failure_reason=FailureReason.BUDGET_EXCEEDED, **base)

    candidates: list[tuple[HierEntity, tuple[tuple[str, str], ...]]] = []
    for combo in combinations(sorted(pool), k):
        matching = perfect_matching(entity.members, combo, eq)
        if matching is not None:
            candidates.append((HierEntity(combo), matching))

    if not candidates:
        return Level1Verdict(entity, Status.REJECTED,
                             failure_reason=FailureReason.NO_EQUIVALENT_PRODUCT, **base)

    # Stages a candidate partner can reach; the final reason reflects the
    # furthest stage any candidate got to before failing.
    best_stage = 0
    best_detail: Level1Verdict | None = None
    for partner, matching in candidates:
        try:
            chains = _enumerate_chains(trace, entity, partner.members, caps, mode)
        except BudgetExceededError:
            return Level1Verdict(entity, Status.INCONCLUSIVE, partner=partner,
                                 failure_reason=FailureReason.BUDGET_EXCEEDED, **base)
        if not chains:
            continue

        stage = 1  # chains found, all trivial so far
        trivial_margin: tuple[int, int] | None = None
        witnesses: list[tuple[MetaReaction, ...]] = []
        margin: tuple[int, int] | None = None
        copies: tuple[int, int] | None = None
        consumed: set[str] = set()
        offender = False
        for chain in chains:
            try:
                nontrivial, counted, threshold = is_nontrivial(
                    entity, partner, list(chain), trace, caps.max_len, mode, caps.path_budget
                )
            except BudgetExceededError:
                return Level1Verdict(entity, Status.INCONCLUSIVE, partner=partner,
                                     failure_reason=FailureReason.BUDGET_EXCEEDED, **base)
            if not nontrivial:
                if trivial_margin is None:
                    trivial_margin = (counted, threshold)
                continue
            stage = 2  # a non-trivial chain exists

            start, end = _chain_window(chain, trace)
            before = copy_count(entity, trace.states[start])
            after = copy_count(entity, trace.states[end])
            if after <= before:
                continue  # no reproduction event over this window
            participating: set[str] = set()
            for meta in chain:
                participating |= seq_input(meta.steps, spec).support()
            shrunk = frozenset(
                s for s in participating - entity.members
                if trace.states[end][s] < trace.states[start][s]
            )
            if not shrunk:
                offender = True
                continue
            if not witnesses:
                margin = (counted, threshold)
                copies = (before, after)
            witnesses.append(chain)
            consumed |= shrunk

        if witnesses and not offender:
            return Level1Verdict(
                entity, Status.POTENTIAL,
                witness=witnesses[0], partner=partner, matching=matching,
                nontriviality_margin=margin, copies=copies,
                consumed=frozenset(consumed), **base,
            )
        if stage > best_stage:
            best_stage = stage
            if stage == 1:
                best_detail = Level1Verdict(
                    entity, Status.REJECTED, partner=partner, matching=matching,
                    nontriviality_margin=trivial_margin,
                    failure_reason=FailureReason.TRIVIAL_CAUSALITY, **base,
                )
            else:
                best_detail = Level1Verdict(
                    entity, Status.REJECTED, partner=partner, matching=matching,
                    failure_reason=FailureReason.MATERIAL_BASIS_VIOLATED, **base,
                )

    if best_detail is not None:
        return best_detail
    return Level1Verdict(entity, Status.REJECTED,
                         failure_reason=FailureReason.NO_CAUSAL_PATH, **base)
