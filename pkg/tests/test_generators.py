from __future__ import annotations

import pytest

from threshold_audit.errors import BadParameter, TooManyMinimalSets, TrivialFamily
from threshold_audit.family import MonotoneFamily
from threshold_audit.generators import (
    TribesParams,
    dual_tribes,
    hypergraph_matching_family,
    majority,
    random_monotone,
    subcube,
    tribes_closed_forms,
    tribes_optimality_ratio,
    tribes_regime_report,
)
from threshold_audit.measure import critical_probability, mu, mu_derivative, optimality_ratio

TRIBES_CASES = [(4, 2), (6, 2), (6, 3), (8, 2), (9, 3)]


def test_subcube_and_majority():
    assert subcube(4, [0, 1]).as_lists() == [[0, 1]]
    assert subcube(2, [0, 1]).as_lists() == [[0, 1]]
    assert len(majority(5)) == 10
    with pytest.raises(TrivialFamily):
        subcube(3, [])
    with pytest.raises(BadParameter):
        majority(4)


def test_dual_tribes_construction():
    assert dual_tribes(TribesParams(4, 2)).as_lists() == [[0, 2], [1, 2], [0, 3], [1, 3]]
    assert dual_tribes(TribesParams(2, 1)).as_lists() == [[0, 1]]
    assert dual_tribes(TribesParams(3, 3)).as_lists() == [[0], [1], [2]]
    with pytest.raises(BadParameter):
        dual_tribes(TribesParams(5, 2))
    with pytest.raises(TooManyMinimalSets):
        dual_tribes(TribesParams(64, 2))


@pytest.mark.parametrize(("n", "k"), TRIBES_CASES)
def test_dual_tribes_shape(n, k):
    family = dual_tribes(TribesParams(n, k))
    assert len(family) == k ** (n // k)
    assert all(mask.bit_count() == n // k for mask in family.minimal_sets)


@pytest.mark.parametrize(("n", "k"), TRIBES_CASES)
def test_closed_forms_match_enumeration(n, k):
    params = TribesParams(n, k)
    family = dual_tribes(params)
    for p in (0.1, 0.3, 0.5, 0.7, 0.9):
        forms = tribes_closed_forms(params, p)
        assert forms.m == pytest.approx(mu(family, p), abs=1e-9)
        assert forms.m_prime == pytest.approx(mu_derivative(family, p), abs=1e-9)
        assert tribes_optimality_ratio(params, p) == pytest.approx(
            optimality_ratio(family, p), rel=1e-9
        )
    p_c = tribes_closed_forms(params, 0.5).p_c
    assert p_c == pytest.approx(critical_probability(family, 1e-12), abs=1e-9)


def test_closed_form_anchors():
    forms = tribes_closed_forms(TribesParams(4, 2), 0.5)
    assert forms.m == pytest.approx(0.5625)
    assert forms.p_c == pytest.approx(1 - (1 - 2**-0.5) ** 0.5)
    assert forms.p_c == pytest.approx(0.4588039, abs=1e-6)
    assert tribes_closed_forms(TribesParams(4, 2), 1e-9).m < 1e-15


@pytest.mark.parametrize("n", [16, 64, 256, 1024])
def test_regime_report(n):
    report = tribes_regime_report(n)
    assert 0.01 < report["p_c"] < 0.99
    assert report["p_c_in_range"]
    assert report["rows"]


def test_regime_block_sizes():
    assert tribes_regime_report(16)["k"] == 2
    assert tribes_regime_report(256)["k"] == 5


def test_random_monotone_is_deterministic():
    first = random_monotone(6, 4, seed=1)
    assert first == random_monotone(6, 4, seed=1)
    assert len(random_monotone(3, 1, seed=5)) == 1


def test_random_monotone_outputs_are_valid():
    for seed in range(1000):
        family = random_monotone(8, 1 + seed % 6, seed)
        assert isinstance(family, MonotoneFamily)
        # Re-running the constructor re-validates the canonical antichain.
        assert MonotoneFamily(family.n, family.minimal_sets) == family


def test_hypergraph_matching_family():
    family = hypergraph_matching_family(6, 3)
    assert family.n == 20
    assert len(family) == 10
    assert all(mask.bit_count() == 2 for mask in family.minimal_sets)
    assert len(hypergraph_matching_family(4, 2)) == 3
    with pytest.raises(BadParameter):
        hypergraph_matching_family(9, 3)
