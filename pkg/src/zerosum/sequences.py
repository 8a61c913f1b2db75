"""Sequences (multisets) over a group, subsums, and cross numbers.

A sequence is an unordered multiset of group elements; the canonical form
lists distinct elements by ascending rank together with multiplicities.
Cross numbers are exact rationals (fractions.Fraction), never floats.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Iterator, Literal

from .groups import AbelianGroup, GroupElement, tables_for

FilterMode = Literal["divides", "equals"]


@dataclass(frozen=True)
class GSequence:
    """Finite multiset of group elements in canonical (rank-sorted) form.

    ``entries`` maps element ranks to positive multiplicities, stored as a
    tuple of (rank, multiplicity) pairs with strictly increasing ranks.
    """

    group: AbelianGroup
    entries: tuple[tuple[int, int], ...]

    def __post_init__(self):
        entries = tuple((int(r), int(m)) for r, m in self.entries)
        object.__setattr__(self, "entries", entries)
        size = self.group.cardinality
        last = -1
        for rank, mult in entries:
            if not 0 <= rank < size:
                raise ValueError(f"rank {rank} out of range for {self.group}")
            if rank <= last:
                raise ValueError("entries must have strictly increasing ranks")
            if mult < 1:
                raise ValueError(f"multiplicity {mult} below 1")
            last = rank

    # -- construction -------------------------------------------------------

    @classmethod
    def empty(cls, group: AbelianGroup) -> "GSequence":
        return cls(group, ())

    @classmethod
    def from_ranks(cls, group: AbelianGroup, ranks: Iterable[int]) -> "GSequence":
        counts: dict[int, int] = {}
        for r in ranks:
            counts[r] = counts.get(r, 0) + 1
        return cls(group, tuple(sorted(counts.items())))

    @classmethod
    def from_elements(cls, group: AbelianGroup,
                      elements: Iterable[GroupElement | Iterable[int]]) -> "GSequence":
        ranks = []
        for e in elements:
            if not isinstance(e, GroupElement):
                e = group.element(e)
            elif e.group != group:
                raise ValueError(f"element {e} does not belong to {group}")
            ranks.append(e.rank)
        return cls.from_ranks(group, ranks)

    # -- views ----------------------------------------------------------------

    @cached_property
    def length(self) -> int:
        return sum(m for _, m in self.entries)

    def __len__(self) -> int:
        return self.length

    @property
    def is_empty(self) -> bool:
        return not self.entries

    def __iter__(self) -> Iterator[GroupElement]:
        """Each occurrence once, ascending by rank."""
        for rank, mult in self.entries:
            e = self.group.element_of_rank(rank)
            for _ in range(mult):
                yield e

    def iter_ranks(self) -> Iterator[int]:
        for rank, mult in self.entries:
            for _ in range(mult):
                yield rank

    def support(self) -> list[GroupElement]:
        return [self.group.element_of_rank(r) for r, _ in self.entries]

    def multiplicity(self, element: GroupElement | int) -> int:
        rank = element.rank if isinstance(element, GroupElement) else element
        for r, m in self.entries:
            if r == rank:
                return m
        return 0

    def total(self) -> GroupElement:
        acc = self.group.zero
        for rank, mult in self.entries:
            acc = acc + mult * self.group.element_of_rank(rank)
        return acc

    def contains_zero_element(self) -> bool:
        return bool(self.entries) and self.entries[0][0] == 0

    # -- derived sequences ------------------------------------------------------

    def remove_one(self, element: GroupElement | int) -> "GSequence":
        """Copy with one occurrence of the given element removed."""
        rank = element.rank if isinstance(element, GroupElement) else element
        out = []
        hit = False
        for r, m in self.entries:
            if r == rank and not hit:
                hit = True
                if m > 1:
                    out.append((r, m - 1))
            else:
                out.append((r, m))
        if not hit:
            raise ValueError(f"rank {rank} not present in sequence")
        return GSequence(self.group, tuple(out))

    def union(self, other: "GSequence") -> "GSequence":
        if other.group != self.group:
            raise ValueError("sequences over different groups")
        counts = dict(self.entries)
        for r, m in other.entries:
            counts[r] = counts.get(r, 0) + m
        return GSequence(self.group, tuple(sorted(counts.items())))

    def __str__(self) -> str:
        if not self.entries:
            return "()"
        bits = []
        for rank, mult in self.entries:
            e = str(self.group.element_of_rank(rank))
            bits.append(e if mult == 1 else f"{e}^{mult}")
        return "*".join(bits)


@dataclass(frozen=True)
class SubsumTable:
    """Dense membership map: bit k of ``mask`` is set iff the rank-k element
    is a sum over some nonempty sub-multiset of the source sequence."""

    group: AbelianGroup
    mask: int

    def __contains__(self, element: GroupElement | int) -> bool:
        rank = element.rank if isinstance(element, GroupElement) else element
        return bool((self.mask >> rank) & 1)

    @property
    def contains_zero(self) -> bool:
        return bool(self.mask & 1)

    @property
    def count(self) -> int:
        return self.mask.bit_count()

    def marked_ranks(self) -> list[int]:
        return [k for k in range(self.group.cardinality) if (self.mask >> k) & 1]

    def marked_elements(self) -> list[GroupElement]:
        return [self.group.element_of_rank(k) for k in self.marked_ranks()]


def subsums(seq: GSequence) -> SubsumTable:
    """All nonempty subsums of the sequence, computed incrementally.

    Start from the empty reachable set; merging one occurrence of g turns
    ``reachable`` into ``reachable | (reachable + g) | {g}``.
    """
    tables = tables_for(seq.group)
    mask = 0
    for rank in seq.iter_ranks():
        mask = mask | tables.translate(mask, rank) | (1 << rank)
    return SubsumTable(seq.group, mask)


def definitional_subsums(seq: GSequence) -> set[int]:
    """Ranks of all nonempty subsums by direct enumeration of index subsets.

    Exponential in the length; this is the independent slow route used to
    cross-check the incremental table, kept deliberately free of any shared
    machinery beyond element addition.
    """
    ranks = list(seq.iter_ranks())
    if len(ranks) > 22:
        raise ValueError(f"definitional enumeration over 2^{len(ranks)} subsets refused")
    tables = tables_for(seq.group)
    sums = [0] * (1 << len(ranks))
    out = set()
    for subset in range(1, 1 << len(ranks)):
        low = (subset & -subset).bit_length() - 1
        s = tables.add(sums[subset & (subset - 1)], ranks[low])
        sums[subset] = s
        out.add(s)
    return out


def is_zero_sumfree(seq: GSequence) -> bool:
    """True iff no nonempty sub-multiset sums to 0 (vacuously true when empty)."""
    return not subsums(seq).contains_zero


def is_minimal_zero_sum(seq: GSequence) -> bool:
    """True iff the total sum is 0 and no proper nonempty sub-multiset is.

    Every proper sub-multiset omits at least one occurrence, so it suffices
    to check the sequences obtained by deleting one copy of each distinct
    element.
    """
    if seq.is_empty:
        raise ValueError("minimality is undefined for the empty sequence")
    if not seq.total().is_zero:
        return False
    return all(not subsums(seq.remove_one(rank)).contains_zero
               for rank, _ in seq.entries)


def cross_number(seq: GSequence) -> Fraction:
    """Sum of reciprocal orders over all occurrences, as an exact rational."""
    tables = tables_for(seq.group)
    total = Fraction(0)
    for rank, mult in seq.entries:
        total += Fraction(mult, tables.orders[rank])
    return total


def order_filter(seq: GSequence, d: int, mode: FilterMode) -> GSequence:
    """Sub-multiset of the elements whose order divides (or equals) d."""
    if d < 1 or seq.group.exponent % d != 0:
        raise ValueError(f"{d} does not divide the exponent {seq.group.exponent}")
    if mode not in ("divides", "equals"):
        raise ValueError(f"unknown filter mode {mode!r}")
    tables = tables_for(seq.group)
    if mode == "divides":
        keep = [(r, m) for r, m in seq.entries if d % tables.orders[r] == 0]
    else:
        keep = [(r, m) for r, m in seq.entries if tables.orders[r] == d]
    return GSequence(seq.group, tuple(keep))


def max_order_count(seq: GSequence) -> int:
    """Number of occurrences whose order equals the group exponent."""
    return order_filter(seq, seq.group.exponent, "equals").length
