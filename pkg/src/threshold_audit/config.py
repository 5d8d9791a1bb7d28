"""Configuration loading for threshold-audit."""

from __future__ import annotations

import os
from dataclasses import dataclass, replace

from .errors import BadParameter

DEFAULT_ENUM_CAP = 24
HARD_ENUM_CAP = 30
DEFAULT_DUAL_CAP = 20
DEFAULT_COVER_CAP = 16
DEFAULT_AUT_CAP = 8
# Subsets are bitmasks; exact ground sets never exceed this many elements.
MAX_ELEMENTS = 64

DEGENERATE_MARGIN = 1e-12


def _int(value: str | None, default: int) -> int:
    try:
        return int(value) if value is not None else default
    except ValueError:
        return default


def _float(value: str | None, default: float) -> float:
    try:
        return float(value) if value is not None else default
    except ValueError:
        return default


@dataclass(frozen=True)
class AuditConfig:
    eps: float = 0.5
    c_opt: float = 1.0
    k_gap: float = 1.0
    delta: float = 0.1
    k1: float = 1.0
    k2: float = 1.0
    tol_root: float = 1e-9
    enum_cap: int = DEFAULT_ENUM_CAP
    dual_cap: int = DEFAULT_DUAL_CAP
    cover_cap: int = DEFAULT_COVER_CAP
    aut_cap: int = DEFAULT_AUT_CAP
    seed: int = 20240601
    trials: int = 10_000
    confidence: float = 0.95
    mc_max_trials: int = 100_000
    workers: int = 1
    log_level: str = "INFO"

    def __post_init__(self) -> None:
        if not 0 < self.eps <= 1:
            raise BadParameter(f"eps must lie in (0, 1], got {self.eps}")
        for name in ("c_opt", "k_gap", "delta", "k1", "k2", "tol_root"):
            if getattr(self, name) <= 0:
                raise BadParameter(f"{name} must be positive")
        if not 1 <= self.enum_cap <= HARD_ENUM_CAP:
            raise BadParameter(
                f"enum_cap must lie in [1, {HARD_ENUM_CAP}], got {self.enum_cap}"
            )
        if not 0 < self.confidence < 1:
            raise BadParameter("confidence must lie in (0, 1)")
        if self.trials < 1 or self.mc_max_trials < 1:
            raise BadParameter("trial counts must be positive")
        if not 0 <= self.seed < 2**64:
            raise BadParameter("seed must be a 64-bit unsigned integer")

    @classmethod
    def from_env(cls) -> AuditConfig:
        return cls(
            eps=_float(os.getenv("THRESHOLD_EPS"), 0.5),
            c_opt=_float(os.getenv("THRESHOLD_C_OPT"), 1.0),
            k_gap=_float(os.getenv("THRESHOLD_K_GAP"), 1.0),
            delta=_float(os.getenv("THRESHOLD_DELTA"), 0.1),
            k1=_float(os.getenv("THRESHOLD_K1"), 1.0),
            k2=_float(os.getenv("THRESHOLD_K2"), 1.0),
            tol_root=_float(os.getenv("THRESHOLD_TOL"), 1e-9),
            enum_cap=_int(os.getenv("THRESHOLD_ENUM_CAP"), DEFAULT_ENUM_CAP),
            dual_cap=_int(os.getenv("THRESHOLD_DUAL_CAP"), DEFAULT_DUAL_CAP),
            cover_cap=_int(os.getenv("THRESHOLD_COVER_CAP"), DEFAULT_COVER_CAP),
            aut_cap=_int(os.getenv("THRESHOLD_AUT_CAP"), DEFAULT_AUT_CAP),
            seed=_int(os.getenv("THRESHOLD_SEED"), 20240601),
            trials=max(1, _int(os.getenv("THRESHOLD_TRIALS"), 10_000)),
            confidence=_float(os.getenv("THRESHOLD_CONFIDENCE"), 0.95),
            # Per-query budget for sequential sampling near p_c.
            mc_max_trials=max(1, _int(os.getenv("THRESHOLD_MC_MAX_TRIALS"), 100_000)),
            workers=max(1, _int(os.getenv("THRESHOLD_WORKERS"), 1)),
            log_level=os.getenv("LOG_LEVEL", "INFO").upper(),
        )

    def with_overrides(self, **values: object) -> AuditConfig:
        """Return a copy with every non-None value replaced."""
        changes = {key: value for key, value in values.items() if value is not None}
        return replace(self, **changes) if changes else self
