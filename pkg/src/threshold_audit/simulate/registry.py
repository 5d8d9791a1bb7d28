"""Registry of Monte Carlo properties: each id maps to a (sampler, checker) builder."""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from ..errors import BadParameter, NotDivisible, TooLarge
from ..graphs import GraphSpec
from .checkers import (
    HAMILTON_VERTEX_CAP,
    MATCHING_VERTEX_CAP,
    TRIANGLE_FACTOR_VERTEX_CAP,
    has_hamilton_cycle,
    has_min_degree,
    has_perfect_matching,
    has_perfect_matching_hypergraph,
    has_subgraph,
    has_triangle_factor,
)
from .sampling import sample_gnp, sample_hypergraph

Sampler = Callable[[float, np.random.Generator], Any]
Checker = Callable[[Any], bool]


@dataclass(frozen=True)
class Property:
    """A monotone property of a random structure, declared rather than verified."""

    name: str
    n: int
    sampler: Sampler
    checker: Checker
    params: dict[str, Any] = field(default_factory=dict)

    def holds(self, p: float, rng: np.random.Generator) -> bool:
        return self.checker(self.sampler(p, rng))

    def describe(self) -> dict[str, Any]:
        return {"property": self.name, "n": self.n, **self.params}


def _gnp(n: int) -> Sampler:
    return lambda p, rng: sample_gnp(n, p, rng)


def _require(n: int, cap: int, label: str) -> None:
    if n > cap:
        raise TooLarge(f"{label} needs n <= {cap}, got {n}")


def _always(n: int, **_: Any) -> Property:
    return Property("always", n, lambda p, rng: None, lambda _structure: True)


def _subgraph(n: int, *, pattern: GraphSpec | None = None, **_: Any) -> Property:
    if pattern is None:
        raise BadParameter("the subgraph property needs a pattern graph")
    return Property(
        "subgraph",
        n,
        _gnp(n),
        lambda graph: has_subgraph(graph, pattern),
        {"pattern": [list(edge) for edge in pattern.edges], "pattern_vertices": pattern.v},
    )


def _hamilton(n: int, **_: Any) -> Property:
    _require(n, HAMILTON_VERTEX_CAP, "Hamiltonicity")
    return Property("hamilton", n, _gnp(n), has_hamilton_cycle)


def _triangle_factor(n: int, **_: Any) -> Property:
    if n % 3:
        raise NotDivisible(f"a triangle factor needs 3 | n, got n={n}")
    _require(n, TRIANGLE_FACTOR_VERTEX_CAP, "triangle factors")
    return Property("trianglefactor", n, _gnp(n), has_triangle_factor)


def _hypermatching(n: int, *, k: int = 3, **_: Any) -> Property:
    if n % k:
        raise NotDivisible(f"a perfect matching needs k | n, got n={n}, k={k}")
    _require(n, MATCHING_VERTEX_CAP, "hypergraph matching")
    return Property(
        "hypermatching",
        n,
        lambda p, rng: sample_hypergraph(n, k, p, rng),
        has_perfect_matching_hypergraph,
        {"k": k},
    )


def _matching(n: int, **_: Any) -> Property:
    if n % 2:
        raise NotDivisible(f"a perfect matching needs 2 | n, got n={n}")
    _require(n, MATCHING_VERTEX_CAP, "graph matching")
    return Property("matching", n, _gnp(n), has_perfect_matching)


def _min_degree(n: int, *, min_degree: int = 2, **_: Any) -> Property:
    return Property(
        "mindegree",
        n,
        _gnp(n),
        lambda graph: has_min_degree(graph, min_degree),
        {"min_degree": min_degree},
    )


PropertyBuilder = Callable[..., Property]

PROPERTY_BUILDERS: tuple[tuple[str, PropertyBuilder], ...] = (
    ("always", _always),
    ("subgraph", _subgraph),
    ("hamilton", _hamilton),
    ("trianglefactor", _triangle_factor),
    ("hypermatching", _hypermatching),
    ("matching", _matching),
    ("mindegree", _min_degree),
)


def property_names() -> list[str]:
    return [name for name, _ in PROPERTY_BUILDERS]


def build_property(name: str, n: int, **params: Any) -> Property:
    builders = dict(PROPERTY_BUILDERS)
    if name not in builders:
        raise BadParameter(f"unknown property {name!r}; choose from {property_names()}")
    if n < 1:
        raise BadParameter(f"n must be positive, got {n}")
    return builders[name](n, **params)
