"""Monotone families on [n], stored as canonical antichains of bitmask minimal sets.

A subset of {0, ..., n-1} is an ``int`` bitmask: element ``i`` is present iff bit
``i`` is set. Exact whole-cube operations (membership tables, level profiles)
enumerate all 2^n masks with numpy and refuse ground sets beyond the cap.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .config import DEFAULT_DUAL_CAP, DEFAULT_ENUM_CAP, HARD_ENUM_CAP, MAX_ELEMENTS
from .errors import BadParameter, DomainError, GroundSetTooLarge, TrivialFamily
from .logging_utils import get_logger

logger = get_logger(__name__)

SetLike = int | Iterable[int]


def to_mask(elements: SetLike, n: int) -> int:
    """Return the bitmask for ``elements``; ints are taken as masks already."""
    if isinstance(elements, int):
        mask = elements
        if mask < 0 or mask >> n:
            raise DomainError(f"mask {mask:#x} is not a subset of [{n}]")
        return mask
    mask = 0
    for element in elements:
        if not 0 <= element < n:
            raise DomainError(f"element {element} outside ground set [0, {n})")
        mask |= 1 << element
    return mask


def to_elements(mask: int) -> tuple[int, ...]:
    elements = []
    while mask:
        low = mask & -mask
        elements.append(low.bit_length() - 1)
        mask ^= low
    return tuple(elements)


def canonical_key(mask: int) -> tuple[int, int]:
    return mask.bit_count(), mask


def _check_ground_set(n: int, cap: int = MAX_ELEMENTS) -> None:
    if n < 1:
        raise BadParameter(f"ground set size must be at least 1, got {n}")
    if n > cap:
        raise GroundSetTooLarge(f"ground set of size {n} exceeds cap {cap}")


def require_enumerable(n: int, cap: int = DEFAULT_ENUM_CAP) -> None:
    """Fail loudly before a 2^n enumeration that the cap does not allow."""
    if cap > HARD_ENUM_CAP:
        raise BadParameter(f"enumeration cap {cap} exceeds hard maximum {HARD_ENUM_CAP}")
    _check_ground_set(n, cap)


@dataclass(frozen=True)
class SetFamily:
    """An arbitrary collection of distinct subsets of [n] (the empty set allowed)."""

    n: int
    sets: tuple[int, ...]

    def __post_init__(self) -> None:
        _check_ground_set(self.n)
        full = (1 << self.n) - 1
        for mask in self.sets:
            if mask < 0 or mask & ~full:
                raise DomainError(f"set {mask:#x} is not a subset of [{self.n}]")
        if len(set(self.sets)) != len(self.sets):
            raise BadParameter("set family contains duplicate sets")

    @classmethod
    def from_lists(cls, n: int, sets: Iterable[SetLike]) -> SetFamily:
        return cls(n, tuple(to_mask(item, n) for item in sets))

    def __len__(self) -> int:
        return len(self.sets)

    def __iter__(self) -> Iterator[int]:
        return iter(self.sets)

    def as_lists(self) -> list[list[int]]:
        return [list(to_elements(mask)) for mask in self.sets]


@dataclass(frozen=True)
class MonotoneFamily:
    """A nontrivial increasing family, identified by its canonical minimal sets."""

    n: int
    minimal_sets: tuple[int, ...]

    def __post_init__(self) -> None:
        _check_ground_set(self.n)
        if not self.minimal_sets:
            raise TrivialFamily("the empty family is excluded")
        if 0 in self.minimal_sets:
            raise TrivialFamily("the full power set is excluded")
        full = (1 << self.n) - 1
        ordered = sorted(self.minimal_sets, key=canonical_key)
        if list(self.minimal_sets) != ordered or len(set(ordered)) != len(ordered):
            raise BadParameter("minimal sets must be canonically sorted and distinct")
        if any(mask & ~full for mask in ordered):
            raise DomainError(f"minimal sets must be subsets of [{self.n}]")
        if len(minimize(ordered)) != len(ordered):
            raise BadParameter("minimal sets must form an antichain")

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def __len__(self) -> int:
        return len(self.minimal_sets)

    def as_lists(self) -> list[list[int]]:
        return [list(to_elements(mask)) for mask in self.minimal_sets]

    def generators(self) -> SetFamily:
        return SetFamily(self.n, self.minimal_sets)


@dataclass(frozen=True)
class LevelProfile:
    """``counts[k]`` is the number of k-element members of the family."""

    counts: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.counts) - 1

    @property
    def total(self) -> int:
        return sum(self.counts)


def minimize(masks: Iterable[int]) -> list[int]:
    """Inclusion-minimal members of ``masks`` in canonical order."""
    kept: list[int] = []
    # Distinct sets of equal size never contain each other, so only strictly
    # smaller kept sets need checking.
    smaller = 0
    for mask in sorted(set(masks), key=canonical_key):
        size = mask.bit_count()
        while smaller < len(kept) and kept[smaller].bit_count() < size:
            smaller += 1
        if not any(small & mask == small for small in kept[:smaller]):
            kept.append(mask)
    return kept


def from_sets(
    n: int, sets: Iterable[SetLike], *, verbose: bool = False, cap: int = MAX_ELEMENTS
) -> MonotoneFamily:
    """Canonical family generated by ``sets``; dominated inputs are dropped silently."""
    _check_ground_set(n, cap)
    masks = [to_mask(item, n) for item in sets]
    if not masks:
        raise TrivialFamily("no generating sets given (F would be empty)")
    if 0 in masks:
        raise TrivialFamily("the empty set generates the whole power set")

    minimal = minimize(masks)
    if verbose and len(minimal) < len(masks):
        dropped = sorted(set(masks) - set(minimal), key=canonical_key)
        logger.info(
            "Removed %s dominated or duplicate set(s): %s",
            len(masks) - len(minimal),
            [list(to_elements(mask)) for mask in dropped],
        )
    return MonotoneFamily(n, tuple(minimal))


def contains(family: MonotoneFamily, subset: SetLike) -> bool:
    mask = to_mask(subset, family.n)
    return any(mask & small == small for small in family.minimal_sets)


def upset_of(generators: SetFamily) -> MonotoneFamily:
    return from_sets(generators.n, generators.sets)


def covers(family: MonotoneFamily, generators: SetFamily) -> bool:
    """True iff every minimal set of ``family`` contains some member of ``generators``."""
    if family.n != generators.n:
        raise BadParameter(
            f"ground sets differ: family on {family.n}, generators on {generators.n}"
        )
    return all(
        any(candidate & minimal == candidate for candidate in generators.sets)
        for minimal in family.minimal_sets
    )


def minimal_transversals(edges: Iterable[int]) -> list[int]:
    """Enumerate the minimal hitting sets of ``edges`` by branch and bound.

    Branching on an unhit edge ``e1..ek`` forbids ``e1..e(i-1)`` in branch ``i``,
    so every hitting set is produced at most once. A partial set is pruned as soon
    as one of its elements has no private edge left, since adding elements never
    restores privacy.
    """
    edges = minimize(edges)
    results: list[int] = []

    def has_private_edges(chosen: int) -> bool:
        for element in to_elements(chosen):
            bit = 1 << element
            if not any(edge & chosen == bit for edge in edges):
                return False
        return True

    def search(chosen: int, forbidden: int) -> None:
        unhit = [edge for edge in edges if not edge & chosen]
        if not unhit:
            results.append(chosen)
            return
        pivot = min(unhit, key=lambda edge: ((edge & ~forbidden).bit_count(), edge))
        options = pivot & ~forbidden
        for element in to_elements(options):
            bit = 1 << element
            extended = chosen | bit
            if has_private_edges(extended):
                search(extended, forbidden)
            forbidden |= bit

    search(0, 0)
    return sorted(results, key=canonical_key)


def dual(family: MonotoneFamily, *, cap: int = DEFAULT_DUAL_CAP) -> MonotoneFamily:
    """F* = {A : X minus A not in F}; its minimal sets are the minimal transversals of F."""
    _check_ground_set(family.n, cap)
    transversals = minimal_transversals(family.minimal_sets)
    logger.debug(
        "Dualized %s minimal sets into %s transversals on n=%s",
        len(family),
        len(transversals),
        family.n,
    )
    return MonotoneFamily(family.n, tuple(transversals))


@lru_cache(maxsize=32)
def subset_sizes(n: int) -> np.ndarray:
    """Popcount of every mask in [0, 2^n)."""
    return np.bitwise_count(np.arange(1 << n, dtype=np.uint32)).astype(np.int64)


@lru_cache(maxsize=8)
def membership_table(family: MonotoneFamily, cap: int = DEFAULT_ENUM_CAP) -> np.ndarray:
    """Boolean array ``t`` with ``t[S]`` true iff ``S`` is in the family.

    Built by marking the minimal sets and closing upward one coordinate at a time.
    """
    require_enumerable(family.n, cap)
    table = np.zeros(1 << family.n, dtype=bool)
    table[list(family.minimal_sets)] = True
    for i in range(family.n):
        blocks = table.reshape(-1, 2, 1 << i)
        blocks[:, 1, :] |= blocks[:, 0, :]
    table.flags.writeable = False
    return table


def dual_by_enumeration(family: MonotoneFamily, *, cap: int = 16) -> MonotoneFamily:
    """Exhaustive dual used to cross-check :func:`dual` on small ground sets."""
    table = membership_table(family, cap)
    index = np.arange(1 << family.n, dtype=np.int64)
    dual_table = ~table[index ^ family.full_mask]
    minimal = dual_table.copy()
    for i in range(family.n):
        bit = 1 << i
        has_bit = (index & bit) != 0
        minimal &= ~has_bit | ~dual_table[index & ~bit]
    return from_sets(family.n, (int(mask) for mask in np.flatnonzero(minimal)))


def level_profile(family: MonotoneFamily, *, cap: int = DEFAULT_ENUM_CAP) -> LevelProfile:
    table = membership_table(family, cap)
    sizes = subset_sizes(family.n)
    counts = np.bincount(sizes[table], minlength=family.n + 1)
    return LevelProfile(tuple(int(count) for count in counts))
