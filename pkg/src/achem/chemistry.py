"""Chemistry declarations and the rule text format.

A chemistry names its molecule universe, a list of deterministic
reactions (each a named pair of input/output multisets), an initial
population, and optional observational-equivalence classes of symbols.

The text format is line oriented, one declaration per line::

    # comment
    molecules: a, a1, c
    reaction r1: a + a1 -> 2 c
    init: 2 a, 1 a1
    equiv variants: a, a_mut

A term is a symbol with an optional positive integer coefficient
("2 c" means two copies of c).  Every symbol used anywhere must be
declared on the molecules line.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property

from .errors import ParseError, UnknownReactionError
from .multiset import Multiset

SYMBOL_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_']*")
_TERM_RE = re.compile(r"^(?:(\d+)\s+)?([A-Za-z_][A-Za-z0-9_']*)$")


@dataclass(frozen=True)
class Reaction:
    """A named rewrite rule: consume ``input``, produce ``output``."""

    name: str
    input: Multiset
    output: Multiset

    def __post_init__(self):
        if not self.input:
            raise ValueError(f"reaction {self.name!r} has an empty input")

    def __str__(self) -> str:
        return f"{self.name}: {_side(self.input)} -> {_side(self.output)}"


def _side(ms: Multiset) -> str:
    terms = []
    for symbol, n in ms.items():
        terms.append(symbol if n == 1 else f"{n} {symbol}")
    return " + ".join(terms)


@dataclass(frozen=True)
class ChemistrySpec:
    """A complete chemistry declaration.

    Immutable after construction; reaction declaration order is
    significant because it defines the default scheduler priority.
    """

    molecules: tuple[str, ...]
    reactions: tuple[Reaction, ...]
    initial: Multiset
    equivalences: tuple[tuple[str, tuple[str, ...]], ...] = ()

    def __post_init__(self):
        declared = set(self.molecules)
        if len(declared) != len(self.molecules):
            raise ValueError("duplicate molecule declaration")
        names = [r.name for r in self.reactions]
        if len(set(names)) != len(names):
            raise ValueError("duplicate reaction name")
        for r in self.reactions:
            for sym in sorted(r.input.support() | r.output.support()):
                if sym not in declared:
                    raise ValueError(f"undeclared symbol {sym!r} in reaction {r.name!r}")
        for sym in self.initial.support():
            if sym not in declared:
                raise ValueError(f"undeclared symbol {sym!r} in initial population")
        seen: set[str] = set()
        for cls_name, members in self.equivalences:
            for sym in members:
                if sym not in declared:
                    raise ValueError(f"undeclared symbol {sym!r} in equivalence class {cls_name!r}")
                if sym in seen:
                    raise ValueError(f"symbol {sym!r} appears in two equivalence classes")
                seen.add(sym)

    @cached_property
    def _by_name(self) -> dict[str, Reaction]:
        return {r.name: r for r in self.reactions}

    def reaction(self, name: str) -> Reaction:
        try:
            return self._by_name[name]
        except KeyError:
            raise UnknownReactionError(f"unknown reaction {name!r}") from None

    def declaration_index(self, name: str) -> int:
        self.reaction(name)
        return [r.name for r in self.reactions].index(name)


@dataclass(frozen=True)
class ReactionSeq:
    """A reaction sequence anchored to states of a run.

    Each step pairs a reaction name with the index of the state where
    that reaction is claimed feasible.  Indices are strictly increasing:
    the sequence has time progression built in.
    """

    steps: tuple[tuple[str, int], ...] = field(default_factory=tuple)

    def __post_init__(self):
        indices = [i for _, i in self.steps]
        if any(b <= a for a, b in zip(indices, indices[1:])):
            raise ValueError("state indices must be strictly increasing")
        if any(i < 0 for i in indices):
            raise ValueError("state indices must be non-negative")

    def __len__(self) -> int:
        return len(self.steps)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.steps)

    @property
    def indices(self) -> tuple[int, ...]:
        return tuple(i for _, i in self.steps)

    def concat(self, other: "ReactionSeq") -> "ReactionSeq":
        return ReactionSeq(self.steps + other.steps)


def seq_input(seq: ReactionSeq, spec: ChemistrySpec) -> Multiset:
    """Additive union of the input multisets of all steps."""
    acc = Multiset()
    for name in seq.names:
        acc = acc.union(spec.reaction(name).input)
    return acc


def seq_output(seq: ReactionSeq, spec: ChemistrySpec) -> Multiset:
    """Additive union of the output multisets of all steps."""
    acc = Multiset()
    for name in seq.names:
        acc = acc.union(spec.reaction(name).output)
    return acc


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------


def _parse_term(text: str, line_no: int, col: int) -> tuple[int, str]:
    m = _TERM_RE.match(text)
    if m is None:
        raise ParseError(f"expected a term like 'a' or '2 a', got {text!r}", line_no, col)
    coeff = int(m.group(1)) if m.group(1) else 1
    if coeff < 1:
        raise ParseError("term coefficient must be positive", line_no, col)
    return coeff, m.group(2)


def _split_list(body: str, sep: str, line_no: int, base_col: int):
    """Split body on sep, yielding (piece, column-of-piece) with whitespace trimmed."""
    offset = 0
    for raw in body.split(sep):
        stripped = raw.strip()
        col = base_col + offset + (len(raw) - len(raw.lstrip()))
        yield stripped, col
        offset += len(raw) + len(sep)


def _parse_terms(body: str, sep: str, line_no: int, base_col: int) -> list[tuple[int, str, int]]:
    out = []
    for piece, col in _split_list(body, sep, line_no, base_col):
        if not piece:
            raise ParseError("empty term", line_no, col)
        coeff, sym = _parse_term(piece, line_no, col)
        out.append((coeff, sym, col))
    return out


def _terms_to_multiset(terms: list[tuple[int, str, int]]) -> Multiset:
    acc: dict[str, int] = {}
    for coeff, sym, _ in terms:
        acc[sym] = acc.get(sym, 0) + coeff
    return Multiset(acc)


def parse_chemistry(text: str) -> ChemistrySpec:
    """Parse chemistry source text into a validated ChemistrySpec.

    Raises ParseError with a 1-based line/column on the first problem
    found: bad syntax, undeclared symbols, duplicate reaction names, or
    an empty reaction input.
    """
    molecules: list[str] | None = None
    molecules_line = 0
    initial_terms: list[tuple[int, str, int]] | None = None
    initial_line = 0
    reactions: list[tuple[str, Multiset, Multiset, int]] = []
    symbol_uses: list[tuple[str, int, int]] = []  # (symbol, line, col) for late validation
    equivalences: list[tuple[str, tuple[str, ...], int]] = []

    lines = text.splitlines()
    for line_no, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        indent = len(line) - len(line.lstrip())
        stripped = line.strip()

        if stripped.startswith("molecules:"):
            if molecules is not None:
                raise ParseError("molecules already declared", line_no, indent + 1)
            body = stripped[len("molecules:"):]
            base = indent + len("molecules:") + 1
            seen: list[str] = []
            for piece, col in _split_list(body, ",", line_no, base):
                if not SYMBOL_RE.fullmatch(piece):
                    raise ParseError(f"invalid molecule symbol {piece!r}", line_no, col)
                if piece in seen:
                    raise ParseError(f"duplicate molecule {piece!r}", line_no, col)
                seen.append(piece)
            if not seen:
                raise ParseError("molecules line declares nothing", line_no, base)
            molecules = seen
            molecules_line = line_no

        elif stripped.startswith("reaction"):
            rest = stripped[len("reaction"):].lstrip()
            name_col = indent + len(stripped) - len(rest) + 1
            if ":" not in rest:
                raise ParseError("reaction line is missing ':'", line_no, name_col)
            name, _, body = rest.partition(":")
            name = name.strip()
            if not SYMBOL_RE.fullmatch(name):
                raise ParseError(f"invalid reaction name {name!r}", line_no, name_col)
            if "->" not in body:
                raise ParseError("reaction body is missing '->'", line_no, name_col + len(name) + 1)
            left, _, right = body.partition("->")
            base_left = indent + stripped.index(":") + 2
            base_right = indent + stripped.index("->") + 3
            if not left.strip():
                raise ParseError(f"reaction {name!r} has an empty input", line_no, base_left)
            if not right.strip():
                raise ParseError(f"reaction {name!r} has an empty output", line_no, base_right)
            in_terms = _parse_terms(left, "+", line_no, base_left)
            out_terms = _parse_terms(right, "+", line_no, base_right)
            symbol_uses.extend((s, line_no, c) for _, s, c in in_terms + out_terms)
            reactions.append((name, _terms_to_multiset(in_terms), _terms_to_multiset(out_terms), line_no))

        elif stripped.startswith("init:"):
            if initial_terms is not None:
                raise ParseError("init already declared", line_no, indent + 1)
            body = stripped[len("init:"):]
            base = indent + len("init:") + 1
            initial_terms = _parse_terms(body, ",", line_no, base)
            symbol_uses.extend((s, line_no, c) for _, s, c in initial_terms)
            initial_line = line_no

        elif stripped.startswith("equiv"):
            rest = stripped[len("equiv"):].lstrip()
            name_col = indent + len(stripped) - len(rest) + 1
            if ":" not in rest:
                raise ParseError("equiv line is missing ':'", line_no, name_col)
            cls_name, _, body = rest.partition(":")
            cls_name = cls_name.strip()
            if not SYMBOL_RE.fullmatch(cls_name):
                raise ParseError(f"invalid equivalence class name {cls_name!r}", line_no, name_col)
            base = indent + stripped.index(":") + 2
            members: list[str] = []
            for piece, col in _split_list(body, ",", line_no, base):
                if not SYMBOL_RE.fullmatch(piece):
                    raise ParseError(f"invalid symbol {piece!r}", line_no, col)
                members.append(piece)
                symbol_uses.append((piece, line_no, col))
            if not members:
                raise ParseError("equivalence class declares no members", line_no, base)
            equivalences.append((cls_name, tuple(members), line_no))

        else:
            raise ParseError(f"unrecognized directive: {stripped.split(':')[0]!r}", line_no, indent + 1)

    eof = len(lines) + 1
    if molecules is None:
        raise ParseError("missing molecules declaration", eof, 1)
    if initial_terms is None:
        raise ParseError("missing init declaration", eof, 1)

    declared = set(molecules)
    for sym, line_no, col in symbol_uses:
        if sym not in declared:
            raise ParseError(f"undeclared symbol {sym!r}", line_no, col)

    seen_names: set[str] = set()
    for name, _, _, line_no in reactions:
        if name in seen_names:
            raise ParseError(f"duplicate reaction name {name!r}", line_no, 1)
        seen_names.add(name)

    seen_eq: set[str] = set()
    for cls_name, members, line_no in equivalences:
        for sym in members:
            if sym in seen_eq:
                raise ParseError(f"symbol {sym!r} appears in two equivalence classes", line_no, 1)
            seen_eq.add(sym)

    return ChemistrySpec(
        molecules=tuple(molecules),
        reactions=tuple(Reaction(n, i, o) for n, i, o, _ in reactions),
        initial=_terms_to_multiset(initial_terms),
        equivalences=tuple((n, m) for n, m, _ in equivalences),
    )


def format_chemistry(spec: ChemistrySpec) -> str:
    """Render a ChemistrySpec back to source text.

    parse_chemistry(format_chemistry(spec)) == spec for every valid spec.
    """
    if not spec.initial:
        raise ValueError("an empty initial population has no source form")
    lines = ["molecules: " + ", ".join(spec.molecules)]
    for r in spec.reactions:
        lines.append(f"reaction {r.name}: {_side(r.input)} -> {_side(r.output)}")
    init_terms = []
    for symbol, n in spec.initial.items():
        init_terms.append(symbol if n == 1 else f"{n} {symbol}")
    lines.append("init: " + ", ".join(init_terms))
    for cls_name, members in spec.equivalences:
        lines.append(f"equiv {cls_name}: " + ", ".join(members))
    return "\n".join(lines) + "\n"
