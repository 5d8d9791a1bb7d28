from __future__ import annotations

import math
from itertools import pairwise

import numpy as np
import pytest
from conftest import P_GRID, TOL

from threshold_audit.errors import DegenerateMeasure, DomainError
from threshold_audit.generators import TribesParams, dual_tribes, majority, subcube
from threshold_audit.measure import (
    ConditionMode,
    analyze,
    best_conditional_boost,
    boundary_sum,
    c7_scan,
    conditional_mu,
    critical_probability,
    dual_iso_gap,
    duality_identities,
    influence,
    iso_gap,
    iso_lemma_gap,
    mu,
    mu_derivative,
    mu_precise,
    optimal_p_sweep,
    optimality_ratio,
    russo_check,
    sweep_grid,
    symmetric_difference_ratio,
)


class TestMajorityAnchors:
    def test_measure_and_derivative(self, majority3):
        assert mu(majority3, 0.5) == pytest.approx(0.5, abs=TOL)
        assert mu(majority3, 0.3) == pytest.approx(3 * 0.09 * 0.7 + 0.027, abs=TOL)
        assert mu_derivative(majority3, 0.5) == pytest.approx(1.5, abs=TOL)

    def test_analysis_row(self, majority3):
        row = analyze(majority3, 0.5).row()
        assert row == pytest.approx((0.5, 0.5, 1.5, 1.5, 0.25, 1.5), abs=TOL)

    def test_influence_is_symmetric(self, majority3):
        per = influence(majority3, 0.5).per_coordinate
        assert per == pytest.approx((0.5, 0.5, 0.5), abs=TOL)

    def test_conditional_measures(self, majority3):
        assert conditional_mu(majority3, 0.5, [0], ConditionMode.SUPERSET) == pytest.approx(0.75)
        assert conditional_mu(majority3, 0.5, [0], "disjoint") == pytest.approx(0.25)

    def test_best_boost(self, majority3):
        chosen, boost = best_conditional_boost(majority3, 0.5, 1)
        assert chosen == (0,)
        assert boost == pytest.approx(1.5)

    @pytest.mark.parametrize("n", [3, 5, 7])
    def test_critical_probability_of_majority(self, n):
        assert critical_probability(majority(n)) == pytest.approx(0.5, abs=TOL)


def test_dictator_boundaries(dictator):
    assert mu(dictator, 0.0) == 0.0
    assert mu(dictator, 1.0) == 1.0
    assert critical_probability(dictator) == pytest.approx(0.5, abs=TOL)


def test_domain_errors(majority3):
    with pytest.raises(DomainError):
        mu(majority3, 1.5)
    with pytest.raises(DomainError):
        iso_gap(majority3, 0.0)
    with pytest.raises(DegenerateMeasure):
        optimality_ratio(subcube(10, range(10)), 0.01)


def test_analyze_lenient_mode_marks_degenerate_points(majority3):
    report = analyze(majority3, 1.0, strict=False)
    assert report.m == 1.0
    assert math.isnan(report.iso_gap)
    assert math.isnan(report.optimality_ratio)


@pytest.mark.parametrize("size", [1, 2, 3])
def test_subcubes_are_exactly_optimal(size):
    for n in range(max(3, size), 11):
        family = subcube(n, range(size))
        for p in np.arange(0.05, 0.96, 0.05):
            assert abs(iso_gap(family, float(p))) <= TOL
            assert abs(optimality_ratio(family, float(p)) - 1) <= TOL


def test_isoperimetric_inequality_on_corpus(corpus):
    for family in corpus:
        for p in P_GRID:
            report = analyze(family, p, strict=False)
            if not math.isnan(report.iso_gap):
                assert report.iso_gap >= -TOL, (family, p)


def test_russo_identity_on_corpus(corpus):
    for family in corpus:
        for p in P_GRID:
            assert russo_check(family, p) <= 1e-8, (family, p)


def test_dual_form_of_inequality(corpus):
    for family in corpus[:300]:
        for p in P_GRID:
            try:
                assert dual_iso_gap(family, p) >= -TOL
            except DegenerateMeasure:
                continue


def test_boundary_sum_equals_scaled_influence(corpus):
    for family in corpus[:200]:
        for p in (0.2, 0.5, 0.8):
            total = influence(family, p).total
            assert boundary_sum(family, p) == pytest.approx(p * total, abs=1e-12)
            assert boundary_sum(family, p) <= family.n * mu(family, p) + TOL


def test_duality_identities(corpus):
    for family in corpus[:100]:
        for p in (0.1, 0.35, 0.5, 0.75):
            residuals = duality_identities(family, p)
            assert residuals.measure <= TOL
            assert residuals.influence <= TOL


def test_precise_measure_agrees(corpus):
    for family in corpus[:50]:
        assert float(mu_precise(family, "0.37")) == pytest.approx(mu(family, 0.37), abs=1e-12)
    assert mu(corpus[0], 0.4, precise=True) == pytest.approx(mu(corpus[0], 0.4), abs=1e-12)


def test_measure_strictly_increasing(corpus):
    for family in corpus[:200]:
        values = [mu(family, p) for p in P_GRID]
        assert all(low < high for low, high in pairwise(values)), family


def test_derivative_matches_finite_difference(corpus):
    h = 1e-6
    for family in corpus[:200]:
        for p in P_GRID:
            quotient = (mu(family, p + h) - mu(family, p - h)) / (2 * h)
            assert quotient == pytest.approx(mu_derivative(family, p), abs=1e-4)


def test_conditioning_on_empty_set_is_unconditional(corpus):
    for family in corpus[:100]:
        for p in (0.2, 0.5, 0.8):
            expected = mu(family, p)
            for mode in ConditionMode:
                assert conditional_mu(family, p, (), mode) == pytest.approx(expected, abs=TOL)


def test_symmetric_difference_vanishes_for_own_generators(majority3):
    assert symmetric_difference_ratio(majority3, majority3.generators(), 0.4) == 0.0


class TestIsoLemma:
    def test_non_negative_on_grid(self):
        values = np.linspace(0.02, 1.0, 50)
        for p in P_GRID:
            for i, alpha in enumerate(values):
                for beta in values[i:]:
                    assert iso_lemma_gap(float(alpha), float(beta), p) >= -1e-12

    def test_zero_on_diagonal(self):
        for p in P_GRID:
            for alpha in np.linspace(0.02, 1.0, 50):
                assert abs(iso_lemma_gap(float(alpha), float(alpha), p)) <= 1e-12

    def test_non_decreasing_in_beta(self):
        h = 1e-6
        values = np.linspace(0.02, 1.0 - 2 * h, 50)
        for p in P_GRID:
            for i, alpha in enumerate(values):
                for beta in values[i:]:
                    a, b = float(alpha), float(beta)
                    slope = (iso_lemma_gap(a, b + h, p) - iso_lemma_gap(a, b, p)) / h
                    assert slope >= -1e-6

    def test_rejects_unordered_arguments(self):
        with pytest.raises(DomainError):
            iso_lemma_gap(0.6, 0.5, 0.5)


class TestOptimalitySweep:
    def test_dictator_witness_at_critical_point(self, dictator):
        witness = optimal_p_sweep(dictator, 0.5)
        assert witness.p == pytest.approx(0.5, abs=1e-9)
        assert witness.c_used == pytest.approx(2 / (0.5 * math.log(2)))

    def test_majority_has_witness(self, majority3):
        witness = optimal_p_sweep(majority3, 0.5)
        assert witness.lower <= witness.p <= witness.p_c

    def test_dual_tribes_witness_and_narrow_scan(self):
        family = dual_tribes(TribesParams(16, 2))
        witness = optimal_p_sweep(family, 0.5)
        assert witness.lower <= witness.p <= witness.p_c
        scan = c7_scan(family, 0.5, 1.0)
        assert scan.upper == pytest.approx(witness.p_c)
        assert scan.found == (scan.p is not None)

    @pytest.mark.parametrize("eps", [0.25, 0.5, 1.0])
    def test_corpus_always_has_witness(self, corpus, eps):
        for family in corpus:
            witness = optimal_p_sweep(family, eps)
            assert witness.lower - TOL <= witness.p <= witness.p_c + TOL

    def test_grid_is_independent_of_worker_count(self, majority3):
        grid = np.linspace(0.05, 0.95, 19)
        serial = sweep_grid(majority3, grid)
        threaded = sweep_grid(majority3, grid, workers=4)
        assert [row.row() for row in serial] == [row.row() for row in threaded]
