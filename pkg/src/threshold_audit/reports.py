"""Sweep CSV output and the gap audit between p_c and the cover thresholds."""

from __future__ import annotations

import csv
import math
from collections.abc import Iterable, Sequence
from dataclasses import asdict, dataclass
from typing import IO

import numpy as np
from rich.console import Console
from rich.table import Table

from .config import AuditConfig
from .cover import q_star, q_threshold
from .errors import CapExceeded
from .family import MonotoneFamily
from .generators import hypergraph_matching_family
from .logging_utils import get_logger
from .measure import AnalysisReport, best_conditional_boost, critical_probability

logger = get_logger(__name__)

SWEEP_HEADER = ("p", "m", "dm_dp", "influence", "iso_gap", "optimality_ratio")
TRIVIAL_BOUND_SLACK = 1e-6


def format_value(value: float) -> str:
    return f"{value:.12g}"


def write_sweep_csv(rows: Iterable[AnalysisReport], stream: IO[str]) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(SWEEP_HEADER)
    for row in rows:
        writer.writerow([format_value(value) for value in row.row()])


def sweep_points(p_c: float, n: int, eps: float, points: int) -> list[float]:
    """Geometric grid over [n^-eps p_c, p_c], ascending."""
    lower = p_c * n ** (-eps)
    return [float(p) for p in np.geomspace(lower, p_c, points)]


@dataclass(frozen=True)
class GapAuditRow:
    """p_c against q (and q*), with the gap normalized by ln n and log2 n."""

    family_id: str
    n: int
    p_c: float
    q: float
    q_star: float | None
    ratio: float
    gap_ln: float | None
    gap_log2: float | None
    k_gap: float
    exceeds_k_gap: bool
    boost_set: tuple[int, ...] | None = None
    boost: float | None = None

    def as_dict(self) -> dict[str, object]:
        data = asdict(self)
        data["log_base"] = "gap_ln uses ln n; gap_log2 uses log2 n"
        if self.boost_set is not None:
            data["boost_set"] = list(self.boost_set)
        return data


def _normalized(ratio: float, log: float) -> float | None:
    # n = 1 has no log-scale to normalize against.
    return ratio / log if log > 0 else None


def audit_family(
    family: MonotoneFamily,
    config: AuditConfig,
    *,
    family_id: str = "family",
    with_q_star: bool = True,
    boost_size: int = 0,
) -> GapAuditRow:
    """Compute p_c, q, optionally q* and the conditional boost for one family.

    A ratio above K_gap ln n is logged as a finding; it never fails the audit.
    q* is skipped with a warning when Aut(F) exceeds its brute-force cap.
    """
    p_c = critical_probability(family, config.tol_root, cap=config.enum_cap)
    q = q_threshold(family, config.tol_root, cap=config.cover_cap).q
    star = None
    if with_q_star:
        try:
            star = q_star(family, config.tol_root, cap=config.cover_cap, aut_cap=config.aut_cap).q
        except CapExceeded as exc:
            logger.warning("Skipping q*: %s", exc)
    ratio = p_c / q if q > 0 else math.inf
    if ratio < 1 - TRIVIAL_BOUND_SLACK:
        logger.error("p_c=%.12g lies below q=%.12g; the cover bound is violated", p_c, q)
    gap_ln = _normalized(ratio, math.log(family.n))
    gap_log2 = _normalized(ratio, math.log2(family.n))
    exceeds = gap_ln is not None and gap_ln > config.k_gap
    if exceeds:
        logger.warning(
            "%s: p_c/q = %.6g exceeds K_gap ln n = %.6g",
            family_id,
            ratio,
            config.k_gap * math.log(family.n),
        )
    boost_set = boost = None
    if boost_size > 0:
        boost_set, boost = best_conditional_boost(family, p_c, boost_size, cap=config.enum_cap)
        if boost < 1 + config.delta:
            logger.info("%s: no set of size <= %s boosts mu_pc by 1+delta", family_id, boost_size)
    return GapAuditRow(
        family_id=family_id,
        n=family.n,
        p_c=p_c,
        q=q,
        q_star=star,
        ratio=ratio,
        gap_ln=gap_ln,
        gap_log2=gap_log2,
        k_gap=config.k_gap,
        exceeds_k_gap=exceeds,
        boost_set=boost_set,
        boost=boost,
    )


def _cell(value: object) -> str:
    if value is None:
        return "-"
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


def render_audit(rows: Sequence[GapAuditRow], console: Console | None = None) -> None:
    table = Table(title="Threshold gap audit")
    columns = ("family_id", "n", "p_c", "q", "q_star", "ratio", "gap_ln", "gap_log2")
    for column in columns:
        if column == "family_id":
            table.add_column(column, no_wrap=True)
        else:
            table.add_column(column, justify="right")
    for row in rows:
        style = "bold red" if row.exceeds_k_gap else None
        table.add_row(*(_cell(getattr(row, column)) for column in columns), style=style)
    (console or Console()).print(table)


@dataclass(frozen=True)
class HypermatchingReport:
    """Exact q and p_c for perfect matchings of the complete k-uniform hypergraph."""

    n: int
    k: int
    slots: int
    matchings: int
    q: float
    scaled_q: float
    p_c: float | None

    def as_dict(self) -> dict[str, object]:
        return asdict(self)


def hypermatching_report(n: int, k: int, config: AuditConfig) -> HypermatchingReport:
    """q alongside q n^(k-1); p_c only while the slot count fits the enumeration cap."""
    family = hypergraph_matching_family(n, k)
    q = q_threshold(family, config.tol_root, cap=config.cover_cap).q
    p_c = None
    if family.n <= config.enum_cap:
        p_c = critical_probability(family, config.tol_root, cap=config.enum_cap)
    else:
        logger.info("Skipping p_c: %s slots exceed the enumeration cap", family.n)
    return HypermatchingReport(
        n=n,
        k=k,
        slots=family.n,
        matchings=len(family),
        q=q,
        scaled_q=q * n ** (k - 1),
        p_c=p_c,
    )
