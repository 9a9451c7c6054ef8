"""Finite multisets of molecule symbols.

A multiset maps each symbol to a non-negative multiplicity.  It is the
state representation of an artificial chemistry: a population snapshot.
Instances are immutable values in canonical form (no zero entries), so
they can be hashed, compared structurally, and shared freely.

Union is additive, intersection takes the per-symbol minimum, and
subtraction saturates at zero so a state transition can never produce a
negative count.
"""

from __future__ import annotations

from collections import Counter
from typing import Iterable, Iterator, Mapping


class Multiset:
    """An immutable multiset of string symbols."""

    __slots__ = ("_counts", "_hash")

    def __init__(self, counts: Mapping[str, int] | Iterable[tuple[str, int]] | None = None):
        items = dict(counts) if counts is not None else {}
        clean: dict[str, int] = {}
        for symbol, n in items.items():
            if not isinstance(symbol, str):
                raise TypeError(f"symbol must be a string, got {type(symbol).__name__}")
            if not isinstance(n, int) or isinstance(n, bool):
                raise TypeError(f"multiplicity of {symbol!r} must be an integer")
            if n < 0:
                raise ValueError(f"multiplicity of {symbol!r} is negative")
            if n > 0:
                clean[symbol] = n
        self._counts = clean
        self._hash: int | None = None

    # -- basic queries ------------------------------------------------

    def __getitem__(self, symbol: str) -> int:
        return self._counts.get(symbol, 0)

    def __contains__(self, symbol: str) -> bool:
        return symbol in self._counts

    def __bool__(self) -> bool:
        return bool(self._counts)

    def __iter__(self) -> Iterator[str]:
        return iter(sorted(self._counts))

    def support(self) -> frozenset[str]:
        """Symbols with non-zero multiplicity."""
        return frozenset(self._counts)

    def total(self) -> int:
        """Total number of molecules, multiplicities included."""
        return sum(self._counts.values())

    def items(self) -> list[tuple[str, int]]:
        """(symbol, multiplicity) pairs in lexicographic symbol order."""
        return sorted(self._counts.items())

    def to_dict(self) -> dict[str, int]:
        return dict(self._counts)

    # -- algebra ------------------------------------------------------

    def union(self, other: "Multiset") -> "Multiset":
        """Additive union: result(e) = self(e) + other(e)."""
        return Multiset(Counter(self._counts) + Counter(other._counts))

    def intersect(self, other: "Multiset") -> "Multiset":
        """Min intersection: result(e) = min(self(e), other(e))."""
        return Multiset(Counter(self._counts) & Counter(other._counts))

    def subtract(self, other: "Multiset") -> "Multiset":
        """Truncated difference: result(e) = max(0, self(e) - other(e))."""
        return Multiset(Counter(self._counts) - Counter(other._counts))

    def contains(self, other: "Multiset") -> bool:
        """True iff other(e) <= self(e) for every symbol e."""
        return all(self._counts.get(s, 0) >= n for s, n in other._counts.items())

    __add__ = union
    __and__ = intersect
    __sub__ = subtract

    def __ge__(self, other: "Multiset") -> bool:
        return self.contains(other)

    def __le__(self, other: "Multiset") -> bool:
        return other.contains(self)

    # -- identity -----------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Multiset):
            return NotImplemented
        return self._counts == other._counts

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._counts.items()))
        return self._hash

    def __repr__(self) -> str:
        inner = ", ".join(f"{s}: {n}" for s, n in self.items())
        return "{" + inner + "}"

    # -- canonical byte encoding --------------------------------------

    def canonical_encode(self) -> bytes:
        """Deterministic byte encoding, equal iff the multisets are equal.

        Symbols are emitted in lexicographic order and length-prefixed,
        so the encoding is injective regardless of symbol content.
        """
        parts = [b"ms:"]
        for symbol, n in self.items():
            raw = symbol.encode("utf-8")
            parts.append(b"%d:%s=%d;" % (len(raw), raw, n))
        return b"".join(parts)


EMPTY = Multiset()


def union(a: Multiset, b: Multiset) -> Multiset:
    return a.union(b)


def intersect(a: Multiset, b: Multiset) -> Multiset:
    return a.intersect(b)


def subtract(a: Multiset, b: Multiset) -> Multiset:
    return a.subtract(b)


def contains(a: Multiset, b: Multiset) -> bool:
    return a.contains(b)


def canonical_encode(m: Multiset) -> bytes:
    return m.canonical_encode()
