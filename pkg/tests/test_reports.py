from __future__ import annotations

import io
import json
import math

import pytest

from threshold_audit.config import AuditConfig
from threshold_audit.generators import subcube
from threshold_audit.io import dumps_canonical
from threshold_audit.measure import analyze
from threshold_audit.reports import (
    SWEEP_HEADER,
    audit_family,
    hypermatching_report,
    sweep_points,
    write_sweep_csv,
)


def strict_loads(text: str) -> object:
    def reject(constant: str) -> None:
        raise ValueError(f"non-standard JSON constant {constant}")

    return json.loads(text, parse_constant=reject)


def test_single_element_family_has_no_log_scale(caplog):
    row = audit_family(subcube(1, [0]), AuditConfig(), family_id="dictator", with_q_star=False)
    assert row.ratio == pytest.approx(1.0, abs=1e-6)
    assert row.gap_ln is None
    assert row.gap_log2 is None
    assert not row.exceeds_k_gap
    assert "exceeds" not in caplog.text
    strict_loads(dumps_canonical(row.as_dict()))


def test_gap_normalized_by_both_logs(majority3):
    row = audit_family(majority3, AuditConfig(), with_q_star=False)
    assert row.gap_ln == pytest.approx(row.ratio / math.log(3))
    assert row.gap_log2 == pytest.approx(row.ratio / math.log2(3))


def test_canonical_dumps_are_strict_json():
    text = dumps_canonical({"b": math.nan, "a": [math.inf, -math.inf, 1.5]})
    assert text == '{"a": [null, null, 1.5], "b": null}'
    assert strict_loads(text) == {"a": [None, None, 1.5], "b": None}


def test_degenerate_analysis_serializes_as_null(majority3):
    report = analyze(majority3, 1.0, strict=False)
    payload = strict_loads(dumps_canonical(report.as_dict()))
    assert payload["iso_gap"] is None
    assert payload["optimality_ratio"] is None
    assert payload["m"] == 1.0


def test_sweep_csv_and_points(majority3):
    points = sweep_points(0.5, 3, 0.5, 4)
    assert points[0] == pytest.approx(0.5 * 3**-0.5)
    assert points[-1] == pytest.approx(0.5)
    stream = io.StringIO()
    write_sweep_csv([analyze(majority3, p) for p in points], stream)
    lines = stream.getvalue().splitlines()
    assert lines[0] == ",".join(SWEEP_HEADER)
    assert len(lines) == 5


def test_hypermatching_report():
    # Each matching of K_6^(3) is a complementary pair of triples.
    report = hypermatching_report(6, 3, AuditConfig())
    assert (report.slots, report.matchings) == (20, 10)
    assert report.q == pytest.approx(20**-0.5, abs=1e-6)
    assert report.scaled_q == pytest.approx(36 * report.q)
    assert report.p_c == pytest.approx(math.sqrt(1 - 2**-0.1), abs=1e-8)
