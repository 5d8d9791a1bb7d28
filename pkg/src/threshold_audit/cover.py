"""Cover thresholds q(F) and q*(F) with explicit witness families.

A cover of F is a family G with every minimal set of F containing a member of G;
its cost at q is sum over A in G of q^|A|. Optimal covers can be searched among
intersections of minimal sets: replacing A by the intersection of all minimal
sets containing A keeps what it covers and cannot raise its cost.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from functools import cache
from itertools import permutations
from typing import Literal

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, milp

from .config import DEFAULT_AUT_CAP, DEFAULT_COVER_CAP
from .errors import BadParameter, DomainError, GroundSetTooLarge, TooManyMinimalSets
from .family import MonotoneFamily, SetFamily, canonical_key, minimize, to_elements
from .logging_utils import get_logger

logger = get_logger(__name__)

CoverMethod = Literal["auto", "dp", "milp"]

MILP_CAP = 256
BISECT_ITERATIONS = 80
HALF = 0.5

Permutation = tuple[int, ...]


@dataclass(frozen=True)
class CoverWitness:
    q: float
    generators: SetFamily
    cost: float

    def as_dict(self) -> dict[str, object]:
        return {"q": self.q, "cost": self.cost, "G": self.generators.as_lists()}


@dataclass(frozen=True)
class CoverThreshold:
    q: float
    witness: CoverWitness


def permute(perm: Permutation, mask: int) -> int:
    image = 0
    for element in to_elements(mask):
        image |= 1 << perm[element]
    return image


@dataclass(frozen=True)
class AutomorphismGroup:
    """Permutations of [n] mapping the minimal sets of F onto themselves."""

    n: int
    elements: tuple[Permutation, ...]

    def __len__(self) -> int:
        return len(self.elements)

    def orbit(self, mask: int) -> tuple[int, ...]:
        return tuple(sorted({permute(perm, mask) for perm in self.elements}, key=canonical_key))

    def orbit_index(self, sets: Iterable[int]) -> dict[int, int]:
        """Map each set to the id of its orbit; ids follow first appearance."""
        index: dict[int, int] = {}
        next_id = 0
        for mask in sets:
            if mask in index:
                continue
            for member in self.orbit(mask):
                index[member] = next_id
            next_id += 1
        return index

    def orbits(self, sets: Iterable[int]) -> list[tuple[int, ...]]:
        grouped: dict[int, list[int]] = {}
        for mask, orbit_id in self.orbit_index(sets).items():
            grouped.setdefault(orbit_id, []).append(mask)
        return [
            tuple(sorted(members, key=canonical_key))
            for _, members in sorted(grouped.items())
        ]


def _check_minimal_count(family: MonotoneFamily, cap: int) -> None:
    if len(family) > cap:
        raise TooManyMinimalSets(
            f"family has {len(family)} minimal sets; the cover cap is {cap}"
        )


def candidate_sets(family: MonotoneFamily, *, cap: int = DEFAULT_COVER_CAP) -> SetFamily:
    """All intersections of nonempty collections of minimal sets, empty set included."""
    _check_minimal_count(family, cap)
    minimal = family.minimal_sets
    found = set(minimal)
    frontier = set(minimal)
    while frontier:
        fresh = {mask & other for mask in frontier for other in minimal} - found
        found |= fresh
        frontier = fresh
    return SetFamily(family.n, tuple(sorted(found, key=canonical_key)))


def _coverage(family: MonotoneFamily, sets: Iterable[int]) -> int:
    covered = 0
    for mask in sets:
        for j, minimal in enumerate(family.minimal_sets):
            if mask & minimal == mask:
                covered |= 1 << j
    return covered


@dataclass(frozen=True)
class _CoverProblem:
    """Atomic items (single candidates or whole orbits) and what each covers."""

    family: MonotoneFamily
    items: tuple[tuple[int, ...], ...]
    coverage: tuple[int, ...]

    def weights(self, q: float) -> list[float]:
        # Python's 0.0 ** 0 is 1.0, so the empty set costs 1 at every q.
        return [math.fsum(q ** mask.bit_count() for mask in item) for item in self.items]


def _problem(family: MonotoneFamily, items: Sequence[tuple[int, ...]]) -> _CoverProblem:
    useful = [(item, _coverage(family, item)) for item in items]
    useful = [(item, covered) for item, covered in useful if covered]
    return _CoverProblem(
        family,
        tuple(item for item, _ in useful),
        tuple(covered for _, covered in useful),
    )


def _solve_dp(problem: _CoverProblem, weights: Sequence[float]) -> tuple[float, list[int]]:
    """Exact minimum over coverage masks, always extending the lowest uncovered bit."""
    size = len(problem.family)
    full = (1 << size) - 1
    by_bit: list[list[int]] = [[] for _ in range(size)]
    for item, covered in enumerate(problem.coverage):
        for j in range(size):
            if covered >> j & 1:
                by_bit[j].append(item)

    @cache
    def best(state: int) -> tuple[float, int]:
        if state == full:
            return 0.0, -1
        lowest = (~state & (state + 1)).bit_length() - 1
        choice = min(
            by_bit[lowest],
            key=lambda item: weights[item] + best(state | problem.coverage[item])[0],
        )
        return weights[choice] + best(state | problem.coverage[choice])[0], choice

    cost = best(0)[0]
    chosen, state = [], 0
    while state != full:
        _, item = best(state)
        chosen.append(item)
        state |= problem.coverage[item]
    logger.debug("Cover DP visited %s states for %s items", best.cache_info().currsize, len(weights))
    return cost, chosen


def _solve_milp(problem: _CoverProblem, weights: Sequence[float]) -> tuple[float, list[int]]:
    """Exact 0/1 program: minimize w.x subject to every minimal set being covered."""
    size = len(problem.family)
    matrix = np.zeros((size, len(weights)))
    for item, covered in enumerate(problem.coverage):
        for j in range(size):
            if covered >> j & 1:
                matrix[j, item] = 1.0
    result = milp(
        c=np.asarray(weights, dtype=float),
        constraints=LinearConstraint(matrix, lb=1.0, ub=np.inf),
        integrality=np.ones(len(weights)),
        bounds=Bounds(0, 1),
        options={"mip_rel_gap": 0.0},
    )
    if result.x is None:
        raise BadParameter(f"cover program did not solve: {result.message}")
    chosen = [item for item, value in enumerate(result.x) if value > 0.5]
    return math.fsum(weights[item] for item in chosen), chosen


def _resolve_method(family: MonotoneFamily, method: CoverMethod, cap: int, milp_cap: int) -> str:
    if method == "dp" or (method == "auto" and len(family) <= cap):
        _check_minimal_count(family, cap)
        return "dp"
    _check_minimal_count(family, milp_cap)
    return "milp"


def _witness(problem: _CoverProblem, chosen: Sequence[int], q: float) -> CoverWitness:
    sets = minimize(mask for item in chosen for mask in problem.items[item])
    cost = math.fsum(q ** mask.bit_count() for mask in sets)
    return CoverWitness(q=q, generators=SetFamily(problem.family.n, tuple(sets)), cost=cost)


def _solve(problem: _CoverProblem, q: float, method: str) -> CoverWitness:
    weights = problem.weights(q)
    solver = _solve_dp if method == "dp" else _solve_milp
    _, chosen = solver(problem, weights)
    return _witness(problem, chosen, q)


def _check_q(q: float) -> None:
    if not 0 <= q <= 1:
        raise DomainError(f"q must lie in [0, 1], got {q}")


def min_cover_cost(
    family: MonotoneFamily,
    q: float,
    *,
    cap: int = DEFAULT_COVER_CAP,
    method: CoverMethod = "auto",
    milp_cap: int = MILP_CAP,
) -> CoverWitness:
    """Cheapest cover of F at q among candidate intersections, with its witness."""
    _check_q(q)
    resolved = _resolve_method(family, method, cap, milp_cap)
    candidates = candidate_sets(family, cap=max(cap, milp_cap))
    problem = _problem(family, [(mask,) for mask in candidates])
    return _solve(problem, q, resolved)


def _bisect_threshold(
    problem: _CoverProblem, method: str, tol: float
) -> CoverThreshold:
    """sup{q : min cost < 1/2}; the lower endpoint is returned with its witness."""
    lo, hi = 0.0, 1.0
    for _ in range(BISECT_ITERATIONS):
        if hi - lo <= tol:
            break
        mid = (lo + hi) / 2
        if _solve(problem, mid, method).cost < HALF:
            lo = mid
        else:
            hi = mid
    witness = _solve(problem, lo, method)
    logger.debug("Cover threshold bracket [%.12g, %.12g], witness cost %.12g", lo, hi, witness.cost)
    return CoverThreshold(q=lo, witness=witness)


def q_threshold(
    family: MonotoneFamily,
    tol: float = 1e-9,
    *,
    cap: int = DEFAULT_COVER_CAP,
    method: CoverMethod = "auto",
    milp_cap: int = MILP_CAP,
) -> CoverThreshold:
    """q(F): the supremum of q admitting a cover of cost below 1/2."""
    resolved = _resolve_method(family, method, cap, milp_cap)
    candidates = candidate_sets(family, cap=max(cap, milp_cap))
    problem = _problem(family, [(mask,) for mask in candidates])
    return _bisect_threshold(problem, resolved, tol)


def _element_signature(family: MonotoneFamily, element: int) -> tuple[int, ...]:
    bit = 1 << element
    return tuple(sorted(mask.bit_count() for mask in family.minimal_sets if mask & bit))


def _close_group(generators: Sequence[Permutation], n: int) -> tuple[Permutation, ...]:
    identity = tuple(range(n))
    group = {identity}
    frontier = [identity]
    while frontier:
        current = frontier.pop()
        for gen in generators:
            product = tuple(gen[current[i]] for i in range(n))
            if product not in group:
                group.add(product)
                frontier.append(product)
    return tuple(sorted(group))


def automorphisms(
    family: MonotoneFamily,
    generators: Sequence[Sequence[int]] | None = None,
    *,
    cap: int = DEFAULT_AUT_CAP,
) -> AutomorphismGroup:
    """Aut(F), by brute force up to ``cap`` elements or by closing supplied generators."""
    n = family.n
    minimal = set(family.minimal_sets)

    def preserves(perm: Permutation) -> bool:
        return {permute(perm, mask) for mask in minimal} == minimal

    if generators is not None:
        perms = [tuple(gen) for gen in generators]
        for perm in perms:
            if sorted(perm) != list(range(n)) or not preserves(perm):
                raise BadParameter(f"{list(perm)} is not an automorphism of the family")
        return AutomorphismGroup(n, _close_group(perms, n))

    if n > cap:
        raise GroundSetTooLarge(
            f"brute-force automorphisms need n <= {cap}; supply generators for n={n}"
        )
    signatures = [_element_signature(family, i) for i in range(n)]
    elements = [
        perm
        for perm in permutations(range(n))
        if all(signatures[i] == signatures[perm[i]] for i in range(n)) and preserves(perm)
    ]
    return AutomorphismGroup(n, tuple(elements))


def q_star(
    family: MonotoneFamily,
    tol: float = 1e-9,
    *,
    group: AutomorphismGroup | None = None,
    cap: int = DEFAULT_COVER_CAP,
    aut_cap: int = DEFAULT_AUT_CAP,
    method: CoverMethod = "auto",
    milp_cap: int = MILP_CAP,
) -> CoverThreshold:
    """q*(F): as q(F) but G must be Aut(F)-invariant, so orbits are taken whole."""
    resolved = _resolve_method(family, method, cap, milp_cap)
    if group is None:
        group = automorphisms(family, cap=aut_cap)
    candidates = candidate_sets(family, cap=max(cap, milp_cap))
    orbits = group.orbits(candidates.sets)
    logger.debug("%s candidates fall into %s orbits under |Aut|=%s", len(candidates), len(orbits), len(group))
    return _bisect_threshold(_problem(family, orbits), resolved, tol)


def admits_cheap_cover(
    family: MonotoneFamily, p: float, *, cap: int = DEFAULT_COVER_CAP, method: CoverMethod = "auto"
) -> bool:
    """Whether some G with F inside <G> has sum of p^|S| at most 1/2."""
    return min_cover_cost(family, p, cap=cap, method=method).cost <= HALF
