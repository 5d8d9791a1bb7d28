"""Random structures with reproducible per-trial streams."""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations

import numpy as np

from ..errors import DomainError
from ..graphs import GraphSpec
from .structures import HypergraphSpec


def trial_rng(seed: int, *keys: int) -> np.random.Generator:
    """Independent generator for (seed, keys...); identical keys replay identical draws."""
    return np.random.default_rng(np.random.SeedSequence([seed, *keys]))


@lru_cache(maxsize=64)
def _k_sets(n: int, k: int) -> tuple[tuple[int, ...], ...]:
    return tuple(combinations(range(n), k))


def _check(p: float) -> None:
    if not 0 <= p <= 1:
        raise DomainError(f"p must lie in [0, 1], got {p}")


def sample_gnp(n: int, p: float, rng: np.random.Generator) -> GraphSpec:
    """G(n, p): each of the C(n,2) pairs is an edge independently with probability p."""
    _check(p)
    pairs = _k_sets(n, 2)
    keep = rng.random(len(pairs)) < p
    return GraphSpec(n, tuple(pair for pair, chosen in zip(pairs, keep, strict=True) if chosen))


def sample_hypergraph(n: int, k: int, p: float, rng: np.random.Generator) -> HypergraphSpec:
    """Random k-uniform hypergraph: each k-set is an edge with probability p."""
    _check(p)
    if not 1 <= k <= n:
        raise DomainError(f"need 1 <= k <= n, got n={n}, k={k}")
    k_sets = _k_sets(n, k)
    keep = rng.random(len(k_sets)) < p
    return HypergraphSpec(
        n, k, tuple(edge for edge, chosen in zip(k_sets, keep, strict=True) if chosen)
    )
