"""Monte Carlo estimates of mu_p and sequential bisection for empirical thresholds."""

from __future__ import annotations

import math
from collections.abc import Callable, Sequence
from concurrent.futures import ThreadPoolExecutor

from scipy.stats import norm

from ..errors import BadParameter, DomainError, Inconclusive
from ..logging_utils import get_logger
from .registry import Property
from .sampling import trial_rng
from .structures import CriticalEstimate, MCEstimate

logger = get_logger(__name__)

DEFAULT_BATCH = 250
DEFAULT_MAX_TRIALS = 100_000
CHUNK = 500


def wilson_interval(successes: int, trials: int, confidence: float = 0.95) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if trials < 1 or not 0 <= successes <= trials:
        raise BadParameter(f"invalid counts {successes}/{trials}")
    z = float(norm.ppf(1 - (1 - confidence) / 2))
    phat = successes / trials
    denom = 1 + z * z / trials
    center = (phat + z * z / (2 * trials)) / denom
    half = z * math.sqrt(phat * (1 - phat) / trials + z * z / (4 * trials * trials)) / denom
    return max(0.0, min(center - half, phat)), min(1.0, max(center + half, phat))


def _count(prop: Property, p: float, seed: int, stream: int, start: int, stop: int) -> int:
    return sum(prop.holds(p, trial_rng(seed, stream, index)) for index in range(start, stop))


def _run_trials(
    prop: Property, p: float, seed: int, stream: int, start: int, count: int, workers: int
) -> int:
    """Successes among trials ``start .. start+count-1``; independent of ``workers``."""
    if workers <= 1 or count <= CHUNK:
        return _count(prop, p, seed, stream, start, start + count)
    bounds = [(lo, min(lo + CHUNK, start + count)) for lo in range(start, start + count, CHUNK)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return sum(pool.map(lambda b: _count(prop, p, seed, stream, *b), bounds))


def estimate_mu(
    prop: Property,
    p: float,
    trials: int,
    seed: int,
    *,
    confidence: float = 0.95,
    stream: int = 0,
    workers: int = 1,
) -> MCEstimate:
    if trials < 1:
        raise BadParameter(f"trials must be positive, got {trials}")
    if not 0 <= p <= 1:
        raise DomainError(f"p must lie in [0, 1], got {p}")
    successes = _run_trials(prop, p, seed, stream, 0, trials, workers)
    low, high = wilson_interval(successes, trials, confidence)
    return MCEstimate(p, trials, successes, successes / trials, low, high, confidence, seed, stream)


def _query(
    prop: Property,
    p: float,
    seed: int,
    stream: int,
    *,
    batch: int,
    max_trials: int,
    look_confidence: float,
    confidence: float,
    workers: int,
) -> tuple[MCEstimate, int]:
    """Sample in doubling batches until the interval excludes 1/2 or the cap is hit.

    Returns the estimate and the side of 1/2 it lies on (+1, -1, or 0 if undecided).
    """
    trials = successes = 0
    size = min(batch, max_trials)
    while True:
        successes += _run_trials(prop, p, seed, stream, trials, size, workers)
        trials += size
        low, high = wilson_interval(successes, trials, look_confidence)
        side = 1 if low > 0.5 else -1 if high < 0.5 else 0
        if side or trials >= max_trials:
            break
        size = min(trials, max_trials - trials)
    report_low, report_high = wilson_interval(successes, trials, confidence)
    estimate = MCEstimate(
        p, trials, successes, successes / trials, report_low, report_high, confidence, seed, stream
    )
    return estimate, side


def empirical_critical_p(
    prop: Property,
    tol: float = 0.01,
    confidence: float = 0.95,
    seed: int = 0,
    *,
    batch: int = DEFAULT_BATCH,
    max_trials: int = DEFAULT_MAX_TRIALS,
    bracket: tuple[float, float] = (0.0, 1.0),
    workers: int = 1,
    strict: bool = False,
) -> CriticalEstimate:
    """Bisection on p where each query decides mu_p above or below 1/2 by sequential sampling.

    The error budget 1 - confidence is split across the looks one query may take,
    so repeated peeking does not inflate the per-query error. An undecided query
    ends the search with its bracket flagged (or raises with ``strict``).
    """
    if not 0 < confidence < 1 or tol <= 0:
        raise BadParameter("need 0 < confidence < 1 and tol > 0")
    lo, hi = bracket
    looks = math.ceil(math.log2(max(max_trials / batch, 1))) + 1
    look_confidence = 1 - (1 - confidence) / looks
    queries: list[MCEstimate] = []
    stream = 0
    while hi - lo > tol:
        p = (lo + hi) / 2
        estimate, side = _query(
            prop,
            p,
            seed,
            stream,
            batch=batch,
            max_trials=max_trials,
            look_confidence=look_confidence,
            confidence=confidence,
            workers=workers,
        )
        queries.append(estimate)
        stream += 1
        logger.debug("query p=%.6g: %s/%s, side %+d", p, estimate.successes, estimate.trials, side)
        if side > 0:
            hi = p
        elif side < 0:
            lo = p
        else:
            logger.warning(
                "Query at p=%.6g stayed undecided after %s trials; bracket [%.6g, %.6g]",
                p,
                estimate.trials,
                lo,
                hi,
            )
            if strict:
                raise Inconclusive(f"undecided at p={p:.6g}; bracket [{lo:.6g}, {hi:.6g}]")
            return CriticalEstimate(p, lo, hi, True, seed, tuple(queries))
    return CriticalEstimate((lo + hi) / 2, lo, hi, False, seed, tuple(queries))


def triangle_factor_scale(n: int) -> float:
    return n ** (-2 / 3) * math.log(n) ** (1 / 3)


def critical_trend(
    properties: Sequence[Property],
    tol: float = 0.02,
    confidence: float = 0.95,
    seed: int = 0,
    *,
    max_trials: int = 4_000,
    workers: int = 1,
    reference: Callable[[int], float] | None = None,
) -> list[dict[str, float | int | bool]]:
    """Empirical p_c per size, optionally next to a reference scale; report only."""
    rows: list[dict[str, float | int | bool]] = []
    for prop in properties:
        result = empirical_critical_p(
            prop, tol, confidence, seed, max_trials=max_trials, workers=workers
        )
        row: dict[str, float | int | bool] = {
            "n": prop.n,
            "p_hat": result.p_hat,
            "low": result.low,
            "high": result.high,
            "inconclusive": result.inconclusive,
        }
        if reference is not None:
            row["reference"] = reference(prop.n)
        rows.append(row)
    return rows
