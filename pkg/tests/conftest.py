from __future__ import annotations

import json
import math
from pathlib import Path

import pytest

from threshold_audit.family import MonotoneFamily, from_sets
from threshold_audit.generators import majority, random_monotone, subcube

TOL = 1e-9
P_GRID = (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9)
CORPUS_SEED = 20240601


def _corpus(size: int, max_n: int = 10) -> list[MonotoneFamily]:
    families = []
    for index in range(size):
        n = 3 + index % (max_n - 2)
        count = 1 + (index // 7) % 6
        families.append(random_monotone(n, count, CORPUS_SEED + index))
    return families


@pytest.fixture(scope="session")
def corpus() -> list[MonotoneFamily]:
    """1000 seeded random families on 3..10 elements with 1..6 drawn sets."""
    return _corpus(1000)


@pytest.fixture(scope="session")
def small_corpus() -> list[MonotoneFamily]:
    """Seeded families with n <= 5 for brute-force cover checks."""
    return _corpus(120, max_n=5)


@pytest.fixture
def majority3() -> MonotoneFamily:
    return majority(3)


@pytest.fixture
def dictator() -> MonotoneFamily:
    return subcube(1, [0])


@pytest.fixture
def pair_subcube() -> MonotoneFamily:
    return subcube(4, [0, 1])


@pytest.fixture
def write_json(tmp_path: Path):
    def write(name: str, payload: object) -> str:
        path = tmp_path / name
        path.write_text(json.dumps(payload), encoding="utf-8")
        return str(path)

    return write


def brute_force_cover_cost(family: MonotoneFamily, q: float) -> float:
    """Minimum of sum q^|A| over all families G of subsets of [n] covering F.

    Relaxes over every subset of the ground set (not only intersections of
    minimal sets), so it is independent of the candidate reduction.
    """
    size = len(family)
    full = (1 << size) - 1
    best = [math.inf] * (1 << size)
    best[0] = 0.0
    moves = []
    for subset in range(1 << family.n):
        covered = sum(
            1 << j for j, minimal in enumerate(family.minimal_sets) if subset & minimal == subset
        )
        if covered:
            moves.append((covered, q ** subset.bit_count()))
    for state in range(1 << size):
        if best[state] == math.inf:
            continue
        for covered, weight in moves:
            target = state | covered
            if best[state] + weight < best[target]:
                best[target] = best[state] + weight
    return best[full]


def family(n: int, *sets: list[int]) -> MonotoneFamily:
    return from_sets(n, sets)
