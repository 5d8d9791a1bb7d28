"""Product-measure analysis of monotone families.

Every quantity here is exact up to double rounding: mu_p and its derivative come
from the level profile, influences from pivotal-pair counts over the whole cube.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from enum import StrEnum
from functools import lru_cache
from itertools import combinations

import mpmath
import numpy as np
from numpy.polynomial import polynomial as P
from scipy.optimize import bisect

from .config import DEFAULT_DUAL_CAP, DEFAULT_ENUM_CAP, DEGENERATE_MARGIN
from .errors import DegenerateMeasure, DomainError, SweepFailed
from .family import (
    MonotoneFamily,
    SetFamily,
    SetLike,
    dual,
    level_profile,
    membership_table,
    subset_sizes,
    to_mask,
    upset_of,
)
from .logging_utils import get_logger

logger = get_logger(__name__)

SWEEP_POINTS = 1000
BISECT_MAXITER = 200


class ConditionMode(StrEnum):
    SUPERSET = "superset"
    DISJOINT = "disjoint"


@dataclass(frozen=True)
class AnalysisReport:
    p: float
    m: float
    m_prime: float
    influence: float
    iso_gap: float
    optimality_ratio: float

    def row(self) -> tuple[float, ...]:
        return (
            self.p,
            self.m,
            self.m_prime,
            self.influence,
            self.iso_gap,
            self.optimality_ratio,
        )

    def as_dict(self) -> dict[str, float]:
        return asdict(self)


@dataclass(frozen=True)
class Influence:
    total: float
    per_coordinate: tuple[float, ...]


@dataclass(frozen=True)
class CpoptWitness:
    """A point of the sweep interval where the family is (C log2(1/p), p)-optimal."""

    p: float
    c_used: float
    p_c: float
    lower: float
    ratio: float


@dataclass(frozen=True)
class C7Scan:
    found: bool
    p: float | None
    lower: float
    upper: float
    c_used: float


@dataclass(frozen=True)
class DualityResiduals:
    measure: float
    influence: float


def _check_probability(p: float, *, open_interval: bool = False) -> None:
    if open_interval and not 0 < p < 1:
        raise DomainError(f"p must lie in (0, 1), got {p}")
    if not 0 <= p <= 1:
        raise DomainError(f"p must lie in [0, 1], got {p}")


def _bernstein(coefficients: Sequence[float], p: float) -> float:
    """Evaluate sum_k c_k p^k (1-p)^(d-k) with d = len(c) - 1.

    Horner runs in the ratio p/(1-p) or (1-p)/p, whichever is at most 1, so every
    partial sum stays a combination of non-negative terms for monotone families.
    """
    degree = len(coefficients) - 1
    coeffs = np.asarray(coefficients, dtype=float)
    if p <= 0.5:
        return float((1 - p) ** degree * P.polyval(p / (1 - p), coeffs))
    return float(p**degree * P.polyval((1 - p) / p, coeffs[::-1]))


def _derivative_coefficients(counts: Sequence[int]) -> list[int]:
    """Bernstein coefficients of m'(p) in degree n-1: (k+1)a_(k+1) - (n-k)a_k."""
    n = len(counts) - 1
    return [(k + 1) * counts[k + 1] - (n - k) * counts[k] for k in range(n)]


def mu(
    family: MonotoneFamily,
    p: float,
    *,
    precise: bool = False,
    cap: int = DEFAULT_ENUM_CAP,
) -> float:
    """mu_p(F) = sum_k a_k p^k (1-p)^(n-k)."""
    _check_probability(p)
    counts = level_profile(family, cap=cap).counts
    if precise:
        return float(mu_precise(family, p, cap=cap))
    return _bernstein(counts, p)


def mu_precise(
    family: MonotoneFamily, p: float | str, *, dps: int = 40, cap: int = DEFAULT_ENUM_CAP
) -> mpmath.mpf:
    """mu_p(F) in mpmath arithmetic (40 decimal digits is about 133 bits)."""
    counts = level_profile(family, cap=cap).counts
    n = len(counts) - 1
    with mpmath.workdps(dps):
        q = mpmath.mpf(p)
        return mpmath.fsum(a * q**k * (1 - q) ** (n - k) for k, a in enumerate(counts))


def mu_derivative(family: MonotoneFamily, p: float, *, cap: int = DEFAULT_ENUM_CAP) -> float:
    _check_probability(p)
    counts = level_profile(family, cap=cap).counts
    return _bernstein(_derivative_coefficients(counts), p)


def critical_probability(
    family: MonotoneFamily, tol_root: float = 1e-9, *, cap: int = DEFAULT_ENUM_CAP
) -> float:
    """The unique p with mu_p(F) = 1/2, by bisection on [0, 1] with tolerance on p."""
    counts = level_profile(family, cap=cap).counts

    def excess(p: float) -> float:
        return _bernstein(counts, p) - 0.5

    p_c = bisect(excess, 0.0, 1.0, xtol=tol_root, maxiter=BISECT_MAXITER)
    logger.debug("p_c=%.12g for family with %s minimal sets", p_c, len(family))
    return float(p_c)


@lru_cache(maxsize=32)
def pivot_counts(family: MonotoneFamily, cap: int = DEFAULT_ENUM_CAP) -> np.ndarray:
    """``counts[i, k]``: sets S of size k avoiding i with exactly one of S, S+i in F."""
    table = membership_table(family, cap)
    sizes = subset_sizes(family.n)
    index = np.arange(1 << family.n, dtype=np.int64)
    counts = np.zeros((family.n, family.n), dtype=np.int64)
    for i in range(family.n):
        bit = 1 << i
        without = index[(index & bit) == 0]
        pivotal = table[without | bit] != table[without]
        counts[i] = np.bincount(sizes[without[pivotal]], minlength=family.n)
    counts.flags.writeable = False
    return counts


def _size_weights(n: int, p: float) -> np.ndarray:
    k = np.arange(n + 1)
    return np.power(p, k) * np.power(1 - p, n - k)


def influence(family: MonotoneFamily, p: float, *, cap: int = DEFAULT_ENUM_CAP) -> Influence:
    """Total and per-coordinate influence I_p(F) by exact pivotality sums."""
    _check_probability(p)
    per_coordinate = pivot_counts(family, cap) @ _size_weights(family.n - 1, p)
    values = tuple(float(value) for value in per_coordinate)
    return Influence(total=math.fsum(values), per_coordinate=values)


def russo_check(family: MonotoneFamily, p: float, *, cap: int = DEFAULT_ENUM_CAP) -> float:
    return abs(influence(family, p, cap=cap).total - mu_derivative(family, p, cap=cap))


def _log_base(value: float, base: float) -> float:
    return math.log(value) / math.log(base)


def _nondegenerate(m: float) -> None:
    if not DEGENERATE_MARGIN < m < 1 - DEGENERATE_MARGIN:
        raise DegenerateMeasure(f"mu_p(F) = {m!r} is too close to 0 or 1")


def iso_gap(family: MonotoneFamily, p: float, *, cap: int = DEFAULT_ENUM_CAP) -> float:
    """p I_p(F) - m log_p m, non-negative for every family."""
    _check_probability(p, open_interval=True)
    m = mu(family, p, cap=cap)
    _nondegenerate(m)
    return p * influence(family, p, cap=cap).total - m * _log_base(m, p)


def dual_iso_gap(family: MonotoneFamily, p: float, *, cap: int = DEFAULT_ENUM_CAP) -> float:
    """(1-p) I_p(F) - (1-m) log_(1-p)(1-m), the inequality read through F*."""
    _check_probability(p, open_interval=True)
    m = mu(family, p, cap=cap)
    _nondegenerate(m)
    return (1 - p) * influence(family, p, cap=cap).total - (1 - m) * _log_base(1 - m, 1 - p)


def optimality_ratio(
    family: MonotoneFamily, p: float, *, cap: int = DEFAULT_ENUM_CAP
) -> float:
    """R(F, p) = p m'(p) / (m log_p m); F is (C, p)-optimal iff R <= C."""
    _check_probability(p, open_interval=True)
    m = mu(family, p, cap=cap)
    _nondegenerate(m)
    return p * mu_derivative(family, p, cap=cap) / (m * _log_base(m, p))


def is_c_p_optimal(
    family: MonotoneFamily, p: float, c: float, *, cap: int = DEFAULT_ENUM_CAP
) -> bool:
    return optimality_ratio(family, p, cap=cap) <= c


def analyze(
    family: MonotoneFamily, p: float, *, strict: bool = True, cap: int = DEFAULT_ENUM_CAP
) -> AnalysisReport:
    """All per-p quantities; with ``strict=False`` degenerate ratios become NaN."""
    _check_probability(p)
    m = mu(family, p, cap=cap)
    m_prime = mu_derivative(family, p, cap=cap)
    total = influence(family, p, cap=cap).total
    try:
        _check_probability(p, open_interval=True)
        _nondegenerate(m)
    except (DomainError, DegenerateMeasure):
        if strict:
            raise
        gap = ratio = math.nan
    else:
        log_m = _log_base(m, p)
        gap = p * total - m * log_m
        ratio = p * m_prime / (m * log_m)
    return AnalysisReport(p, m, m_prime, total, gap, ratio)


def sweep_grid(
    family: MonotoneFamily,
    grid: Iterable[float],
    *,
    workers: int = 1,
    cap: int = DEFAULT_ENUM_CAP,
) -> list[AnalysisReport]:
    """Analyze every grid point; results keep grid order for any worker count."""
    points = list(grid)
    # Warm the shared caches before fanning out.
    level_profile(family, cap=cap)
    pivot_counts(family, cap)
    if workers <= 1:
        return [analyze(family, p, strict=False, cap=cap) for p in points]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda p: analyze(family, p, strict=False, cap=cap), points))


def _optimal_at(counts: Sequence[int], derivative: Sequence[int], p: float, c: float) -> bool:
    """p m'(p) <= C m log2(1/m), i.e. R(F, p) <= C log2(1/p)."""
    m = _bernstein(counts, p)
    if not 0 < m < 1:
        return False
    return p * _bernstein(derivative, p) <= c * m * math.log2(1 / m)


def optimal_p_sweep(
    family: MonotoneFamily,
    eps: float,
    *,
    points: int = SWEEP_POINTS,
    tol_root: float = 1e-9,
    cap: int = DEFAULT_ENUM_CAP,
) -> CpoptWitness:
    """Find p in [n^-eps p_c, p_c] where F is (C log2(1/p), p)-optimal, C = 2/(eps ln 2).

    The grid is geometric and scanned downward from p_c; the first success wins.
    """
    if not 0 < eps <= 1:
        raise DomainError(f"eps must lie in (0, 1], got {eps}")
    counts = level_profile(family, cap=cap).counts
    derivative = _derivative_coefficients(counts)
    c = 2 / (eps * math.log(2))
    p_c = critical_probability(family, tol_root, cap=cap)
    lower = p_c * family.n ** (-eps)
    for p in np.geomspace(p_c, lower, points):
        p = float(p)
        if _optimal_at(counts, derivative, p, c):
            m = _bernstein(counts, p)
            ratio = p * _bernstein(derivative, p) / (m * _log_base(m, p))
            logger.debug("cpopt witness p=%.6g (ratio %.6g, C=%.6g)", p, ratio, c)
            return CpoptWitness(p=p, c_used=c, p_c=p_c, lower=lower, ratio=ratio)
    raise SweepFailed(
        f"no (C log(1/p), p)-optimal point in [{lower:.6g}, {p_c:.6g}] with C={c:.6g}"
    )


def c7_scan(
    family: MonotoneFamily,
    eps: float,
    c: float,
    *,
    points: int = SWEEP_POINTS,
    tol_root: float = 1e-9,
    cap: int = DEFAULT_ENUM_CAP,
) -> C7Scan:
    """Report whether some p in [eps p_c / log2 n, p_c] is (C log2(1/p), p)-optimal."""
    counts = level_profile(family, cap=cap).counts
    derivative = _derivative_coefficients(counts)
    p_c = critical_probability(family, tol_root, cap=cap)
    log_n = math.log2(family.n)
    lower = min(p_c, eps * p_c / log_n) if log_n > 0 else p_c
    for p in np.geomspace(p_c, lower, points):
        if _optimal_at(counts, derivative, float(p), c):
            return C7Scan(True, float(p), lower, p_c, c)
    return C7Scan(False, None, lower, p_c, c)


def _conditioned(
    family: MonotoneFamily, condition: np.ndarray, p: float, cap: int
) -> float:
    table = membership_table(family, cap)
    sizes = subset_sizes(family.n)
    weights = _size_weights(family.n, p)
    total = np.bincount(sizes[condition], minlength=family.n + 1) @ weights
    if total <= 0:
        raise DegenerateMeasure("the conditioning event has probability zero")
    hits = np.bincount(sizes[condition & table], minlength=family.n + 1) @ weights
    return float(hits / total)


def conditional_mu(
    family: MonotoneFamily,
    p: float,
    condition_set: SetLike,
    mode: ConditionMode | str = ConditionMode.SUPERSET,
    *,
    cap: int = DEFAULT_ENUM_CAP,
) -> float:
    """mu_p(S in F | S contains R) or mu_p(S in F | S misses R)."""
    _check_probability(p)
    mode = ConditionMode(mode)
    mask = to_mask(condition_set, family.n)
    index = np.arange(1 << family.n, dtype=np.int64)
    if mode is ConditionMode.SUPERSET:
        condition = (index & mask) == mask
    else:
        condition = (index & mask) == 0
    return _conditioned(family, condition, p, cap)


def best_conditional_boost(
    family: MonotoneFamily, p: float, max_size: int, *, cap: int = DEFAULT_ENUM_CAP
) -> tuple[tuple[int, ...], float]:
    """Largest mu_p(F | S contains R) / m(p) over |R| <= max_size (report only)."""
    m = mu(family, p, cap=cap)
    if m <= 0:
        raise DegenerateMeasure("mu_p(F) vanishes")
    best: tuple[tuple[int, ...], float] = ((), 1.0)
    for size in range(1, min(max_size, family.n) + 1):
        for chosen in combinations(range(family.n), size):
            boost = conditional_mu(family, p, chosen, ConditionMode.SUPERSET, cap=cap) / m
            if boost > best[1]:
                best = (chosen, boost)
    return best


def boundary_sum(family: MonotoneFamily, p: float, *, cap: int = DEFAULT_ENUM_CAP) -> float:
    """sum over S in F of mu_p(S) times the number of i in S with S - i outside F."""
    _check_probability(p)
    table = membership_table(family, cap)
    sizes = subset_sizes(family.n)
    index = np.arange(1 << family.n, dtype=np.int64)
    lower_boundary = np.zeros(1 << family.n, dtype=np.int64)
    for i in range(family.n):
        bit = 1 << i
        lower_boundary += table & ((index & bit) != 0) & ~table[index & ~bit]
    per_size = np.bincount(sizes, weights=lower_boundary, minlength=family.n + 1)
    return float(per_size @ _size_weights(family.n, p))


def symmetric_difference_ratio(
    family: MonotoneFamily, generators: SetFamily, p: float, *, cap: int = DEFAULT_ENUM_CAP
) -> float:
    """mu_p(F xor <G>) / m(p); a fixed-n reading of the "o(m(p))" structure statement."""
    _check_probability(p)
    generated = upset_of(generators)
    difference = membership_table(family, cap) ^ membership_table(generated, cap)
    sizes = subset_sizes(family.n)
    weights = _size_weights(family.n, p)
    m = mu(family, p, cap=cap)
    if m <= 0:
        raise DegenerateMeasure("mu_p(F) vanishes")
    return float(np.bincount(sizes[difference], minlength=family.n + 1) @ weights / m)


def duality_identities(
    family: MonotoneFamily,
    p: float,
    *,
    cap: int = DEFAULT_ENUM_CAP,
    dual_cap: int = DEFAULT_DUAL_CAP,
) -> DualityResiduals:
    """Residuals of mu_(1-p)(F*) = 1 - mu_p(F) and I_(1-p)(F*) = I_p(F)."""
    _check_probability(p)
    star = dual(family, cap=dual_cap)
    return DualityResiduals(
        measure=abs(mu(star, 1 - p, cap=cap) - (1 - mu(family, p, cap=cap))),
        influence=abs(
            influence(star, 1 - p, cap=cap).total - influence(family, p, cap=cap).total
        ),
    )


def iso_lemma_gap(alpha: float, beta: float, p: float) -> float:
    """Left-hand side of the two-point inequality behind the induction step.

    (1-p) a log_p a + p b log_p b + p (b - a) - ((1-p) a + p b) log_p((1-p) a + p b)
    """
    if not 0 < alpha <= beta <= 1:
        raise DomainError(f"need 0 < alpha <= beta <= 1, got alpha={alpha}, beta={beta}")
    if not 0 < p < 1:
        raise DomainError(f"p must lie in (0, 1), got {p}")
    mix = (1 - p) * alpha + p * beta
    return (
        (1 - p) * alpha * _log_base(alpha, p)
        + p * beta * _log_base(beta, p)
        + p * (beta - alpha)
        - mix * _log_base(mix, p)
    )
