"""Finite abelian groups in invariant-factor form, with element arithmetic.

A group is described by its invariant factors n_1 | n_2 | ... | n_r (each
at least 2); elements are residue vectors with component-wise arithmetic.
Every element also has a canonical mixed-radix *rank* in [0, |G|) which is
used for ordering, hashing and dense table indexing throughout the package.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import product
from typing import Iterable, Iterator

from .errors import InvalidGroupError, UndefinedHeightError, UnsupportedGroupError

# Constructors reject groups larger than this; keeps subsum tables dense.
CARDINALITY_CAP = 1_000_000


def _factorize(n: int) -> dict[int, int]:
    """Prime factorization by trial division; inputs are at most CARDINALITY_CAP."""
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out[p] = e
        p += 1 if p == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


@dataclass(frozen=True)
class AbelianGroup:
    """A finite abelian group given by its invariant-factor chain.

    The constructor insists on an actual chain (each factor divides the
    next); use :func:`normalize_group` to canonicalize an arbitrary list of
    cyclic orders first.
    """

    invariant_factors: tuple[int, ...]

    def __post_init__(self):
        factors = tuple(int(n) for n in self.invariant_factors)
        object.__setattr__(self, "invariant_factors", factors)
        if not factors:
            raise InvalidGroupError("group needs at least one cyclic factor")
        for n in factors:
            if n < 2:
                raise InvalidGroupError(f"cyclic factor {n} is below 2")
        for a, b in zip(factors, factors[1:]):
            if b % a != 0:
                raise InvalidGroupError(
                    f"factors {factors} are not a divisibility chain "
                    f"({a} does not divide {b}); use normalize_group()")
        if math.prod(factors) > CARDINALITY_CAP:
            raise InvalidGroupError(
                f"group of order {math.prod(factors)} exceeds the desk-scale "
                f"cap {CARDINALITY_CAP}")

    # -- global structure --------------------------------------------------

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)

    @cached_property
    def cardinality(self) -> int:
        return math.prod(self.invariant_factors)

    @property
    def exponent(self) -> int:
        return self.invariant_factors[-1]

    @cached_property
    def _p_data(self) -> tuple[int, tuple[int, ...]] | None:
        primes = _factorize(self.cardinality)
        if len(primes) != 1:
            return None
        (p, _), = primes.items()
        exps = tuple(round(math.log(n, p)) for n in self.invariant_factors)
        return p, exps

    @property
    def is_p_group(self) -> bool:
        return self._p_data is not None

    @property
    def p(self) -> int:
        """The prime p when this is a p-group."""
        if self._p_data is None:
            raise UnsupportedGroupError(f"{self} is not a p-group")
        return self._p_data[0]

    @property
    def p_exponents(self) -> tuple[int, ...]:
        """Exponents a_1 <= ... <= a_r with n_i = p^{a_i}, for p-groups."""
        if self._p_data is None:
            raise UnsupportedGroupError(f"{self} is not a p-group")
        return self._p_data[1]

    # -- elements ------------------------------------------------------------

    @property
    def zero(self) -> "GroupElement":
        return GroupElement(self, (0,) * self.rank)

    def element(self, coords: Iterable[int]) -> "GroupElement":
        return GroupElement(self, tuple(coords))

    def element_of_rank(self, rank: int) -> "GroupElement":
        if not 0 <= rank < self.cardinality:
            raise ValueError(f"rank {rank} out of range for {self}")
        coords = []
        for n in self.invariant_factors:
            rank, a = divmod(rank, n)
            coords.append(a)
        return GroupElement(self, tuple(coords))

    def elements(self) -> Iterator["GroupElement"]:
        """All elements in ascending rank order."""
        for rank in range(self.cardinality):
            yield self.element_of_rank(rank)

    def subgroup_elements(self, d: int) -> list["GroupElement"]:
        """All x with d*x = 0, ascending by rank; size is prod_i gcd(d, n_i)."""
        if d < 1 or self.exponent % d != 0:
            raise ValueError(f"{d} does not divide the exponent {self.exponent}")
        # d*a == 0 mod n iff a is a multiple of n // gcd(d, n)
        steps = [n // math.gcd(d, n) for n in self.invariant_factors]
        out = []
        # rank order == lexicographic order on reversed coordinate tuples
        for rev in product(*[range(0, n, s) for n, s in
                             zip(reversed(self.invariant_factors), reversed(steps))]):
            out.append(GroupElement(self, tuple(reversed(rev))))
        return out

    def primary_decomposition(self) -> tuple[int, ...]:
        """Prime powers nu_1 <= ... <= nu_s of the finest cyclic decomposition.

        This is the longest way to write the group as a direct sum of cyclic
        groups; the parts multiply to the cardinality.
        """
        parts = []
        for n in self.invariant_factors:
            for p, e in _factorize(n).items():
                parts.append(p ** e)
        return tuple(sorted(parts))

    def __str__(self) -> str:
        return "C" + "xC".join(str(n) for n in self.invariant_factors)


@dataclass(frozen=True)
class GroupElement:
    """A residue vector in its group; coordinates are kept reduced."""

    group: AbelianGroup
    coords: tuple[int, ...]

    def __post_init__(self):
        factors = self.group.invariant_factors
        coords = tuple(int(a) for a in self.coords)
        if len(coords) != len(factors):
            raise ValueError(
                f"coordinate vector of length {len(coords)} does not match "
                f"rank-{len(factors)} group {self.group}")
        object.__setattr__(self, "coords",
                           tuple(a % n for a, n in zip(coords, factors)))

    @cached_property
    def rank(self) -> int:
        """Mixed-radix index a_1 + n_1*(a_2 + n_2*(...)) in [0, |G|)."""
        r = 0
        for n, a in zip(reversed(self.group.invariant_factors), reversed(self.coords)):
            r = r * n + a
        return r

    @property
    def is_zero(self) -> bool:
        return all(a == 0 for a in self.coords)

    def _require_same_group(self, other: "GroupElement") -> None:
        if self.group != other.group:
            raise ValueError(f"elements of {self.group} and {other.group} do not mix")

    def __add__(self, other: "GroupElement") -> "GroupElement":
        self._require_same_group(other)
        return GroupElement(self.group, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "GroupElement":
        return GroupElement(self.group, tuple(-a for a in self.coords))

    def __sub__(self, other: "GroupElement") -> "GroupElement":
        return self + (-other)

    def __mul__(self, k: int) -> "GroupElement":
        if not isinstance(k, int):
            return NotImplemented
        return GroupElement(self.group, tuple(k * a for a in self.coords))

    __rmul__ = __mul__

    def order(self) -> int:
        """Least t >= 1 with t*g = 0; always divides the exponent."""
        return math.lcm(*(n // math.gcd(a, n)
                          for a, n in zip(self.coords, self.group.invariant_factors)))

    def height(self) -> int:
        """Largest p-power p^m such that g = p^m * h is solvable (p-groups, g != 0).

        g lies in p^m * G iff gcd(p^m, n_i) divides a_i in every coordinate.
        Undefined at 0, where the maximum does not exist.
        """
        p = self.group.p
        if self.is_zero:
            raise UndefinedHeightError("height of 0 is undefined")
        factors = self.group.invariant_factors
        m = 0
        while all(a % math.gcd(p ** (m + 1), n) == 0
                  for a, n in zip(self.coords, factors)):
            m += 1
        return p ** m

    def __str__(self) -> str:
        if self.group.rank == 1:
            return str(self.coords[0])
        return "(" + ",".join(str(a) for a in self.coords) + ")"


# -- canonical construction --------------------------------------------------

def normalize_group(factors: Iterable[int]) -> AbelianGroup:
    """Canonicalize arbitrary cyclic orders into the invariant-factor chain.

    The input list is split into prime-power parts and recombined so that the
    result is isomorphic to the direct sum of the given cyclic groups, e.g.
    [4, 6] becomes (2, 12). Idempotent on lists that already form a chain.
    """
    factor_list = [int(n) for n in factors]
    if not factor_list:
        raise InvalidGroupError("group needs at least one cyclic factor")
    for n in factor_list:
        if n < 2:
            raise InvalidGroupError(f"cyclic factor {n} is below 2")
    by_prime: dict[int, list[int]] = {}
    for n in factor_list:
        for p, e in _factorize(n).items():
            by_prime.setdefault(p, []).append(e)
    for exps in by_prime.values():
        exps.sort(reverse=True)
    depth = max(len(exps) for exps in by_prime.values())
    chain = []
    for i in range(depth):
        n_i = 1
        for p, exps in by_prime.items():
            if i < len(exps):
                n_i *= p ** exps[i]
        chain.append(n_i)
    chain.reverse()
    return AbelianGroup(tuple(chain))


# -- functional facade over the element methods -------------------------------

def _require_member(group: AbelianGroup, g: GroupElement) -> None:
    if g.group != group:
        raise ValueError(f"element {g} does not belong to {group}")


def element_add(group: AbelianGroup, g: GroupElement, h: GroupElement) -> GroupElement:
    _require_member(group, g)
    _require_member(group, h)
    return g + h


def element_scale(group: AbelianGroup, k: int, g: GroupElement) -> GroupElement:
    _require_member(group, g)
    return k * g


def element_order(group: AbelianGroup, g: GroupElement) -> int:
    _require_member(group, g)
    return g.order()


def element_height(group: AbelianGroup, g: GroupElement) -> int:
    _require_member(group, g)
    return g.height()


def subgroup_elements(group: AbelianGroup, d: int) -> list[GroupElement]:
    return group.subgroup_elements(d)


def primary_decomposition(group: AbelianGroup) -> tuple[int, ...]:
    return group.primary_decomposition()


# -- rank-indexed arithmetic tables -------------------------------------------

class GroupTables:
    """Dense rank-indexed arithmetic for one group.

    Orders and negation are precomputed for every rank; translation tables
    (used to shift subsum bitmasks by an element) are built lazily per
    element in 8-bit chunks, so memory stays proportional to what a search
    actually touches.
    """

    __slots__ = ("factors", "size", "coords", "orders", "neg", "_shift", "n_chunks")

    def __init__(self, factors: tuple[int, ...]):
        self.factors = factors
        size = math.prod(factors)
        self.size = size
        coords = []
        for rank in range(size):
            x, cs = rank, []
            for n in factors:
                cs.append(x % n)
                x //= n
            coords.append(tuple(cs))
        self.coords = coords
        self.orders = [
            math.lcm(*(n // math.gcd(a, n) for a, n in zip(cs, factors)))
            for cs in coords
        ]
        self.neg = [self.rank_of(tuple(-a for a in cs)) for cs in coords]
        self.n_chunks = (size + 7) // 8
        self._shift: dict[int, list[list[int]]] = {}

    def rank_of(self, coords: tuple[int, ...]) -> int:
        r = 0
        for n, a in zip(reversed(self.factors), reversed(coords)):
            r = r * n + a % n
        return r

    def add(self, x: int, g: int) -> int:
        return self.rank_of(tuple(a + b for a, b in
                                  zip(self.coords[x], self.coords[g])))

    def _shift_tables(self, g: int) -> list[list[int]]:
        tabs = self._shift.get(g)
        if tabs is None:
            row = [self.add(x, g) for x in range(self.size)]
            tabs = []
            for chunk in range(self.n_chunks):
                t = [0] * 256
                for b in range(1, 256):
                    j = chunk * 8 + (b & -b).bit_length() - 1
                    low = t[b & (b - 1)]
                    t[b] = low | (1 << row[j]) if j < self.size else low
                tabs.append(t)
            self._shift[g] = tabs
        return tabs

    def translate(self, mask: int, g: int) -> int:
        """Bitmask of {x + g : x in mask}."""
        tabs = self._shift_tables(g)
        out = 0
        chunk = 0
        while mask:
            out |= tabs[chunk][mask & 0xFF]
            mask >>= 8
            chunk += 1
        return out

    def mask_of(self, ranks: Iterable[int]) -> int:
        m = 0
        for r in ranks:
            m |= 1 << r
        return m


@lru_cache(maxsize=None)
def group_tables(factors: tuple[int, ...]) -> GroupTables:
    return GroupTables(factors)


def tables_for(group: AbelianGroup) -> GroupTables:
    return group_tables(group.invariant_factors)
