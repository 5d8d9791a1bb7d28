"""Constructors for named families and closed forms for the dual tribes family."""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations, product

import numpy as np

from .config import DEFAULT_ENUM_CAP, MAX_ELEMENTS
from .errors import BadParameter, GenerationFailed, TooManyMinimalSets, TrivialFamily
from .family import MonotoneFamily, SetLike, from_sets, to_mask
from .logging_utils import get_logger

logger = get_logger(__name__)

TRIBES_MINIMAL_CAP = 10**5
RANDOM_RETRIES = 100


@dataclass(frozen=True)
class TribesParams:
    """n elements in consecutive blocks of size k; ``blocks`` is n/k."""

    n: int
    k: int

    def __post_init__(self) -> None:
        if self.k < 1 or self.n < 1:
            raise BadParameter(f"need n, k >= 1, got n={self.n}, k={self.k}")

    @property
    def blocks(self) -> float:
        return self.n / self.k

    @property
    def divides(self) -> bool:
        return self.n % self.k == 0


@dataclass(frozen=True)
class TribesClosedForms:
    m: float
    m_prime: float
    p_c: float


def subcube(n: int, required: SetLike) -> MonotoneFamily:
    """{S : S contains R}."""
    mask = to_mask(required, n)
    if not mask:
        raise TrivialFamily("the subcube of the empty set is the whole power set")
    return MonotoneFamily(n, (mask,))


def majority(n: int) -> MonotoneFamily:
    if n < 3 or n % 2 == 0:
        raise BadParameter(f"majority needs an odd n >= 3, got {n}")
    return from_sets(n, combinations(range(n), (n + 1) // 2))


def dual_tribes(params: TribesParams, *, cap: int = TRIBES_MINIMAL_CAP) -> MonotoneFamily:
    """Sets meeting every block {0..k-1}, {k..2k-1}, ...; minimal sets pick one per block."""
    if not params.divides:
        raise BadParameter(f"k={params.k} does not divide n={params.n}")
    count = params.k ** (params.n // params.k)
    if count > cap:
        raise TooManyMinimalSets(f"dual tribes would have {count} minimal sets; cap is {cap}")
    if params.n > MAX_ELEMENTS:
        raise BadParameter(f"n={params.n} exceeds {MAX_ELEMENTS} elements")
    blocks = [range(start, start + params.k) for start in range(0, params.n, params.k)]
    return from_sets(params.n, product(*blocks))


def tribes_closed_forms(params: TribesParams, p: float) -> TribesClosedForms:
    """m(p) = (1-(1-p)^k)^(n/k), m'(p) and p_c = 1 - (1 - 2^(-k/n))^(1/k).

    n/k is used as a real exponent, so the formulas also serve the regime report
    when k does not divide n.
    """
    if not 0 < p < 1:
        raise BadParameter(f"p must lie in (0, 1), got {p}")
    n, k = params.n, params.k
    hit = 1 - (1 - p) ** k
    m = hit**params.blocks
    m_prime = n * hit ** (params.blocks - 1) * (1 - p) ** (k - 1)
    p_c = 1 - (1 - 2 ** (-k / n)) ** (1 / k)
    return TribesClosedForms(m=m, m_prime=m_prime, p_c=p_c)


def tribes_optimality_ratio(params: TribesParams, p: float) -> float:
    """p m'(p) / (m log_p m) from the closed forms, in log space to survive tiny m."""
    n, k = params.n, params.k
    hit = 1 - (1 - p) ** k
    log_m = params.blocks * math.log(hit)
    # p m'/m = p n (1-p)^(k-1) / hit
    scaled_derivative = p * n * (1 - p) ** (k - 1) / hit
    return scaled_derivative / (log_m / math.log(p))


def regime_block_size(n: int) -> int:
    return max(1, round(math.log2(n) - math.log2(math.log2(n))))


def tribes_regime_report(n: int) -> dict[str, object]:
    """p_c and R(p)/log2(1/p) at p = (log2 n)^-j for k = log2 n - log2 log2 n."""
    if n < 4:
        raise BadParameter(f"the regime report needs n >= 4, got {n}")
    params = TribesParams(n, regime_block_size(n))
    p_c = tribes_closed_forms(params, 0.5).p_c
    log_n = math.log2(n)
    rows = []
    for power in (1, 2, 3):
        p = log_n**-power
        if not 0 < p < 1:
            continue
        ratio = tribes_optimality_ratio(params, p)
        rows.append(
            {
                "p": p,
                "log_power": power,
                "optimality_ratio": ratio,
                "ratio_over_log2_inv_p": ratio / math.log2(1 / p),
            }
        )
    return {
        "n": n,
        "k": params.k,
        "k_divides_n": params.divides,
        "p_c": p_c,
        "p_c_in_range": 0.01 < p_c < 0.99,
        "rows": rows,
    }


def random_monotone(
    n: int,
    target_minimal_count: int,
    seed: int,
    *,
    size_probability: float = 0.4,
    cap: int = DEFAULT_ENUM_CAP,
) -> MonotoneFamily:
    """Canonicalize ``target_minimal_count`` random sets with Binomial(n, 0.4) sizes."""
    if not 1 <= n <= cap:
        raise BadParameter(f"n must lie in [1, {cap}], got {n}")
    if target_minimal_count < 1:
        raise BadParameter("target_minimal_count must be positive")
    rng = np.random.default_rng(seed)
    for attempt in range(1, RANDOM_RETRIES + 1):
        sizes = rng.binomial(n, size_probability, size=target_minimal_count)
        if not sizes.all():
            logger.debug("Attempt %s drew an empty set; retrying", attempt)
            continue
        sets = [rng.choice(n, size=int(size), replace=False).tolist() for size in sizes]
        return from_sets(n, sets)
    raise GenerationFailed(f"no nontrivial family after {RANDOM_RETRIES} attempts")


def hypergraph_matching_family(n: int, k: int) -> MonotoneFamily:
    """Perfect matchings of the complete k-uniform hypergraph, on the C(n,k) edge slots.

    Edge slots follow ``itertools.combinations(range(n), k)`` order.
    """
    if k < 1 or n % k:
        raise BadParameter(f"need k >= 1 dividing n, got n={n}, k={k}")
    slots = {edge: index for index, edge in enumerate(combinations(range(n), k))}
    if len(slots) > MAX_ELEMENTS:
        raise BadParameter(f"C({n},{k}) = {len(slots)} slots exceed {MAX_ELEMENTS}")

    def matchings(remaining: tuple[int, ...]) -> list[int]:
        if not remaining:
            return [0]
        first, rest = remaining[0], remaining[1:]
        found = []
        for partners in combinations(rest, k - 1):
            edge = (first, *partners)
            left = tuple(x for x in rest if x not in partners)
            found.extend(mask | 1 << slots[edge] for mask in matchings(left))
        return found

    return from_sets(len(slots), matchings(tuple(range(n))))
