"""Graph thresholds: expectation threshold p_E, maximum density and containment families.

Edge slots of K_n are numbered row by row: ``slot(i, j) = i*n - i*(i+1)/2 + (j-i-1)``
for ``i < j``. Containment families live on that ground set.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Iterator
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np

from .config import DEFAULT_COVER_CAP, MAX_ELEMENTS
from .cover import CoverMethod, q_threshold
from .errors import (
    BadParameter,
    DomainError,
    GraphTooLarge,
    NoEmbedding,
    NotATree,
    TrivialFamily,
)
from .family import MonotoneFamily, from_sets
from .logging_utils import get_logger

logger = get_logger(__name__)

AUT_VERTEX_CAP = 10
PE_EDGE_CAP = 20
DENSITY_VERTEX_CAP = 16
CONTAINMENT_VERTEX_CAP = 11
HALF_BOUND_SLACK = 1e-6

Edge = tuple[int, int]


@dataclass(frozen=True)
class GraphSpec:
    """A labeled simple graph on vertices 0..v-1 with canonically sorted edges."""

    v: int
    edges: tuple[Edge, ...]

    def __post_init__(self) -> None:
        if self.v < 0:
            raise BadParameter(f"vertex count must be non-negative, got {self.v}")
        for a, b in self.edges:
            if not 0 <= a < b < self.v:
                raise DomainError(f"edge ({a}, {b}) is not a sorted pair below {self.v}")
        if list(self.edges) != sorted(set(self.edges)):
            raise BadParameter("edges must be sorted and distinct")

    @classmethod
    def from_edges(cls, v: int, edges: Iterable[Iterable[int]]) -> GraphSpec:
        normalized = set()
        for edge in edges:
            a, b = edge
            if a == b:
                raise BadParameter(f"loop at vertex {a} is not allowed")
            if not (0 <= a < v and 0 <= b < v):
                raise DomainError(f"edge ({a}, {b}) has an endpoint outside [0, {v})")
            normalized.add((min(a, b), max(a, b)))
        return cls(v, tuple(sorted(normalized)))

    @classmethod
    def complete(cls, v: int) -> GraphSpec:
        return cls(v, tuple(combinations(range(v), 2)))

    @classmethod
    def cycle(cls, v: int) -> GraphSpec:
        return cls.from_edges(v, [(i, (i + 1) % v) for i in range(v)])

    @classmethod
    def path(cls, v: int) -> GraphSpec:
        return cls.from_edges(v, [(i, i + 1) for i in range(v - 1)])

    @classmethod
    def star(cls, v: int) -> GraphSpec:
        return cls.from_edges(v, [(0, i) for i in range(1, v)])

    def adjacency(self) -> list[int]:
        """Neighbour bitmask per vertex."""
        adj = [0] * self.v
        for a, b in self.edges:
            adj[a] |= 1 << b
            adj[b] |= 1 << a
        return adj

    def degrees(self) -> list[int]:
        return [mask.bit_count() for mask in self.adjacency()]

    def max_degree(self) -> int:
        return max(self.degrees(), default=0)

    def core(self) -> tuple[GraphSpec, int]:
        """The graph on non-isolated vertices (relabeled in order) and the isolated count."""
        used = sorted({x for edge in self.edges for x in edge})
        relabel = {old: new for new, old in enumerate(used)}
        core = GraphSpec.from_edges(
            len(used), [(relabel[a], relabel[b]) for a, b in self.edges]
        )
        return core, self.v - len(used)

    def padded(self, v: int) -> GraphSpec:
        """The non-isolated part placed on ``v`` vertices."""
        core, _ = self.core()
        if core.v > v:
            raise NoEmbedding(f"{core.v} non-isolated vertices do not fit in {v}")
        return GraphSpec(v, core.edges)

    def is_connected(self) -> bool:
        if self.v == 0:
            return True
        adj = self.adjacency()
        seen = frontier = 1
        while frontier:
            reached = 0
            for vertex in range(self.v):
                if frontier >> vertex & 1:
                    reached |= adj[vertex]
            frontier = reached & ~seen
            seen |= frontier
        return seen == (1 << self.v) - 1

    def is_tree(self) -> bool:
        return self.v >= 1 and len(self.edges) == self.v - 1 and self.is_connected()


@dataclass(frozen=True)
class SubgraphConstraint:
    edges: tuple[Edge, ...]
    copies: int
    bound: float


@dataclass(frozen=True)
class ExpectationThresholdReport:
    p_e: float
    binding_subgraph: tuple[Edge, ...]
    constraints: tuple[SubgraphConstraint, ...]

    def as_dict(self) -> dict[str, object]:
        return {
            "p_E": self.p_e,
            "binding_subgraph": [list(edge) for edge in self.binding_subgraph],
            "constraints": [
                {
                    "edges": [list(edge) for edge in item.edges],
                    "copies": item.copies,
                    "bound": item.bound,
                }
                for item in self.constraints
            ],
        }


@dataclass(frozen=True)
class DensityReport:
    density: Fraction
    witness: tuple[int, ...]

    @property
    def threshold_exponent(self) -> float:
        """Exponent of the fixed-graph containment threshold n^(-1/m(H))."""
        return -1 / float(self.density)

    def as_dict(self) -> dict[str, object]:
        return {
            "m": str(self.density),
            "m_float": float(self.density),
            "witness": list(self.witness),
            "threshold_exponent": self.threshold_exponent,
        }


@dataclass(frozen=True)
class TreeBracket:
    lower: float
    upper: float
    max_degree: int
    base: float


@dataclass(frozen=True)
class GraphCoverReport:
    n: int
    q: float
    p_e: float
    half_bound_holds: bool

    @property
    def ratio(self) -> float:
        return self.q / self.p_e

    def as_dict(self) -> dict[str, object]:
        return {
            "n": self.n,
            "q": self.q,
            "p_E": self.p_e,
            "p_E_half": self.p_e / 2,
            "q_over_p_E": self.ratio,
            "half_bound_holds": self.half_bound_holds,
        }


def _search_order(adj: list[int]) -> list[int]:
    """Vertices ordered so each one has as many earlier neighbours as possible."""
    remaining = set(range(len(adj)))
    order: list[int] = []
    placed = 0
    while remaining:
        nxt = max(
            remaining,
            key=lambda u: ((adj[u] & placed).bit_count(), adj[u].bit_count(), -u),
        )
        order.append(nxt)
        placed |= 1 << nxt
        remaining.remove(nxt)
    return order


def iter_embeddings(
    pattern: GraphSpec, host: GraphSpec, *, exact: bool = False
) -> Iterator[tuple[int, ...]]:
    """Injective vertex maps sending every pattern edge onto a host edge.

    With ``exact`` the map must also send non-edges to non-edges (an isomorphism
    onto its image), which on ``host == pattern`` enumerates automorphisms.
    Candidates are pruned by degree before adjacency is checked.
    """
    p_adj, h_adj = pattern.adjacency(), host.adjacency()
    p_deg = [mask.bit_count() for mask in p_adj]
    h_deg = [mask.bit_count() for mask in h_adj]
    order = _search_order(p_adj)
    mapping = [-1] * pattern.v

    def extend(position: int, used: int) -> Iterator[tuple[int, ...]]:
        if position == len(order):
            yield tuple(mapping)
            return
        u = order[position]
        for w in range(host.v):
            if used >> w & 1:
                continue
            if (h_deg[w] != p_deg[u]) if exact else (h_deg[w] < p_deg[u]):
                continue
            consistent = True
            for x in order[:position]:
                pattern_edge = p_adj[u] >> x & 1
                host_edge = h_adj[w] >> mapping[x] & 1
                if (pattern_edge != host_edge) if exact else (pattern_edge and not host_edge):
                    consistent = False
                    break
            if consistent:
                mapping[u] = w
                yield from extend(position + 1, used | 1 << w)
        mapping[u] = -1

    yield from extend(0, 0)


def automorphism_count(graph: GraphSpec, *, cap: int = AUT_VERTEX_CAP) -> int:
    """|Aut(H)| over all v vertices, isolated ones included."""
    if graph.v > cap:
        raise GraphTooLarge(f"automorphism counting needs v <= {cap}, got {graph.v}")
    core, isolated = graph.core()
    core_count = sum(1 for _ in iter_embeddings(core, core, exact=True))
    return core_count * math.factorial(isolated)


def expectation_threshold(
    graph: GraphSpec,
    *,
    max_edges: int = PE_EDGE_CAP,
    max_vertices: int = AUT_VERTEX_CAP,
) -> ExpectationThresholdReport:
    """p_E(H): the least p with (v!/|Aut(H')|) p^|E(H')| >= 1 for every spanning H'."""
    if len(graph.edges) > max_edges:
        raise GraphTooLarge(f"p_E enumerates 2^|E| subgraphs; |E| <= {max_edges} required")
    if graph.v > max_vertices:
        raise GraphTooLarge(f"p_E needs v <= {max_vertices}, got {graph.v}")
    if not graph.edges:
        raise BadParameter("an edgeless graph imposes no constraint")
    total = math.factorial(graph.v)
    constraints = []
    for mask in range(1, 1 << len(graph.edges)):
        chosen = tuple(edge for i, edge in enumerate(graph.edges) if mask >> i & 1)
        aut = automorphism_count(GraphSpec(graph.v, chosen), cap=max_vertices)
        copies = total // aut
        constraints.append(SubgraphConstraint(chosen, copies, copies ** (-1 / len(chosen))))
    binding = max(constraints, key=lambda item: item.bound)
    return ExpectationThresholdReport(binding.bound, binding.edges, tuple(constraints))


def max_density(graph: GraphSpec, *, cap: int = DENSITY_VERTEX_CAP) -> DensityReport:
    """m(H) = max |E(H[W])| / |W| over vertex sets W spanning at least one edge."""
    if graph.v > cap:
        raise GraphTooLarge(f"density enumeration needs v <= {cap}, got {graph.v}")
    if not graph.edges:
        raise BadParameter("m(H) is undefined for an edgeless graph")
    index = np.arange(1 << graph.v, dtype=np.int64)
    edge_counts = np.zeros(1 << graph.v, dtype=np.int64)
    for a, b in graph.edges:
        edge_counts += ((index >> a) & 1) & ((index >> b) & 1)
    sizes = np.bitwise_count(index.astype(np.uint32)).astype(np.int64)
    densities = np.where(edge_counts > 0, edge_counts / np.maximum(sizes, 1), -1.0)
    best = int(np.argmax(densities))
    witness = tuple(i for i in range(graph.v) if best >> i & 1)
    return DensityReport(Fraction(int(edge_counts[best]), int(sizes[best])), witness)


def edge_slot(i: int, j: int, n: int) -> int:
    if i == j or not (0 <= i < n and 0 <= j < n):
        raise DomainError(f"({i}, {j}) is not an edge of K_{n}")
    i, j = min(i, j), max(i, j)
    return i * n - i * (i + 1) // 2 + (j - i - 1)


def slot_pair(slot: int, n: int) -> Edge:
    for i in range(n - 1):
        row = n - 1 - i
        if slot < row:
            return i, i + 1 + slot
        slot -= row
    raise DomainError(f"slot outside K_{n}")


def containment_family(
    graph: GraphSpec, n: int, *, cap: int = CONTAINMENT_VERTEX_CAP
) -> MonotoneFamily:
    """Graphs on [n] containing a copy of H, as a family on the C(n,2) edge slots."""
    if n > cap or math.comb(n, 2) > MAX_ELEMENTS:
        raise GraphTooLarge(f"containment families need n <= {cap}, got {n}")
    core, _ = graph.core()
    if not core.edges:
        raise TrivialFamily("every graph contains an edgeless pattern")
    if core.v > n:
        raise NoEmbedding(f"H has {core.v} non-isolated vertices but n = {n}")
    copies = {
        sum(1 << edge_slot(image[a], image[b], n) for a, b in core.edges)
        for image in iter_embeddings(core, GraphSpec.complete(n))
    }
    logger.debug("H with %s edges has %s copies in K_%s", len(core.edges), len(copies), n)
    return from_sets(math.comb(n, 2), copies)


def q_of_graph(
    graph: GraphSpec,
    n: int,
    tol: float = 1e-9,
    *,
    cover_cap: int = DEFAULT_COVER_CAP,
    method: CoverMethod = "auto",
) -> float:
    """q(H) on n vertices, the cover threshold of the containment family."""
    family = containment_family(graph, n)
    return q_threshold(family, tol, cap=cover_cap, method=method).q


def graph_cover_report(
    graph: GraphSpec,
    n: int,
    tol: float = 1e-9,
    *,
    cover_cap: int = DEFAULT_COVER_CAP,
    method: CoverMethod = "auto",
) -> GraphCoverReport:
    """q(H) next to p_E(H) padded to n vertices; checks q >= p_E/2 up to rounding."""
    q = q_of_graph(graph, n, tol, cover_cap=cover_cap, method=method)
    p_e = expectation_threshold(graph.padded(n)).p_e
    return GraphCoverReport(
        n=n, q=q, p_e=p_e, half_bound_holds=q >= p_e / 2 - max(tol, HALF_BOUND_SLACK)
    )


def tree_threshold_bracket(
    tree: GraphSpec, n: int, k1: float = 1.0, k2: float = 1.0
) -> TreeBracket:
    """K1, K2 times max(ln n / n, Delta(T) / n); a reporting aid only."""
    if not tree.is_tree():
        raise NotATree(f"graph with {tree.v} vertices and {len(tree.edges)} edges is not a tree")
    if n < 1:
        raise DomainError(f"n must be positive, got {n}")
    delta = tree.max_degree()
    base = max(math.log(n) / n, delta / n)
    return TreeBracket(lower=k1 * base, upper=k2 * base, max_degree=delta, base=base)
