"""Value types shared by the Monte Carlo layer."""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import asdict, dataclass

from ..errors import BadParameter, DomainError


@dataclass(frozen=True)
class HypergraphSpec:
    """A k-uniform hypergraph on 0..n-1 with sorted, distinct edges."""

    n: int
    k: int
    edges: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if self.k < 1 or self.n < 0:
            raise BadParameter(f"need k >= 1 and n >= 0, got n={self.n}, k={self.k}")
        for edge in self.edges:
            if len(edge) != self.k or list(edge) != sorted(set(edge)):
                raise BadParameter(f"edge {edge} is not a sorted {self.k}-set")
            if edge and not 0 <= edge[0] <= edge[-1] < self.n:
                raise DomainError(f"edge {edge} leaves the vertex set [0, {self.n})")
        if list(self.edges) != sorted(set(self.edges)):
            raise BadParameter("edges must be sorted and distinct")

    @classmethod
    def from_edges(cls, n: int, k: int, edges: Iterable[Iterable[int]]) -> HypergraphSpec:
        normalized = {tuple(sorted(edge)) for edge in edges}
        return cls(n, k, tuple(sorted(normalized)))

    def edge_masks(self) -> list[int]:
        return [sum(1 << x for x in edge) for edge in self.edges]


@dataclass(frozen=True)
class MCEstimate:
    p: float
    trials: int
    successes: int
    estimate: float
    ci_low: float
    ci_high: float
    confidence: float
    seed: int
    stream: int = 0

    def as_dict(self) -> dict[str, object]:
        return asdict(self)


@dataclass(frozen=True)
class CriticalEstimate:
    p_hat: float
    low: float
    high: float
    inconclusive: bool
    seed: int
    queries: tuple[MCEstimate, ...]

    def as_dict(self) -> dict[str, object]:
        return {
            "p_hat": self.p_hat,
            "bracket": [self.low, self.high],
            "inconclusive": self.inconclusive,
            "seed": self.seed,
            "queries": [query.as_dict() for query in self.queries],
        }
