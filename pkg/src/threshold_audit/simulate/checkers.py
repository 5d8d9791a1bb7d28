"""Exact decision procedures for the simulated properties."""

from __future__ import annotations

from collections.abc import Iterable
from functools import cache

from ..errors import GraphTooLarge, NotDivisible, TooLarge
from ..graphs import GraphSpec, iter_embeddings
from .structures import HypergraphSpec

PATTERN_VERTEX_CAP = 10
MATCHING_VERTEX_CAP = 24
HAMILTON_VERTEX_CAP = 20
TRIANGLE_FACTOR_VERTEX_CAP = 21


def has_subgraph(host: GraphSpec, pattern: GraphSpec, *, cap: int = PATTERN_VERTEX_CAP) -> bool:
    core, _ = pattern.core()
    if core.v > cap:
        raise GraphTooLarge(f"pattern has {core.v} non-isolated vertices; cap is {cap}")
    if pattern.v > host.v:
        return False
    return next(iter_embeddings(core, host), None) is not None


def _partition_exists(n: int, blocks: Iterable[int]) -> bool:
    """Whether disjoint blocks (vertex bitmasks) can tile [n].

    Only blocks whose lowest vertex is the lowest uncovered one are tried: every
    vertex below it is already covered, so any usable block starts there.
    """
    full = (1 << n) - 1
    by_lowest: list[list[int]] = [[] for _ in range(n)]
    for block in set(blocks):
        if block:
            by_lowest[(block & -block).bit_length() - 1].append(block)

    @cache
    def solve(covered: int) -> bool:
        if covered == full:
            return True
        lowest = (~covered & (covered + 1)).bit_length() - 1
        return any(
            not block & covered and solve(covered | block) for block in by_lowest[lowest]
        )

    return solve(0)


def has_perfect_matching_hypergraph(
    hypergraph: HypergraphSpec, *, cap: int = MATCHING_VERTEX_CAP
) -> bool:
    if hypergraph.n % hypergraph.k:
        raise NotDivisible(f"k={hypergraph.k} does not divide n={hypergraph.n}")
    if hypergraph.n > cap:
        raise TooLarge(f"matching DP needs n <= {cap}, got {hypergraph.n}")
    return _partition_exists(hypergraph.n, hypergraph.edge_masks())


def has_perfect_matching(graph: GraphSpec, *, cap: int = MATCHING_VERTEX_CAP) -> bool:
    return has_perfect_matching_hypergraph(
        HypergraphSpec(graph.v, 2, graph.edges), cap=cap
    )


def has_hamilton_cycle(graph: GraphSpec, *, cap: int = HAMILTON_VERTEX_CAP) -> bool:
    """Held-Karp reachability: ``ends[mask]`` holds the endpoints of paths from 0 over mask."""
    v = graph.v
    if v > cap:
        raise TooLarge(f"Hamilton DP needs v <= {cap}, got {v}")
    if v < 3:
        return False
    adj = graph.adjacency()
    # A Hamilton cycle gives every vertex degree at least 2.
    if any(row.bit_count() < 2 for row in adj):
        return False
    full = (1 << v) - 1
    ends = [0] * (1 << v)
    ends[1] = 1
    for mask in range(1, full + 1, 2):
        reach = ends[mask]
        while reach:
            low = reach & -reach
            reach ^= low
            tail = low.bit_length() - 1
            fresh = adj[tail] & ~mask
            while fresh:
                step = fresh & -fresh
                fresh ^= step
                ends[mask | step] |= step
    closing = ends[full] & adj[0]
    return bool(closing & ~1)


def has_triangle_factor(graph: GraphSpec, *, cap: int = TRIANGLE_FACTOR_VERTEX_CAP) -> bool:
    if graph.v % 3:
        raise NotDivisible(f"3 does not divide v={graph.v}")
    if graph.v > cap:
        raise TooLarge(f"triangle-factor DP needs v <= {cap}, got {graph.v}")
    adj = graph.adjacency()
    triangles = [
        (1 << a) | (1 << b) | (1 << c)
        for a, b in graph.edges
        for c in range(b + 1, graph.v)
        if adj[a] >> c & 1 and adj[b] >> c & 1
    ]
    return _partition_exists(graph.v, triangles)


def has_min_degree(graph: GraphSpec, degree: int) -> bool:
    return all(d >= degree for d in graph.degrees())
