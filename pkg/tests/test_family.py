from __future__ import annotations

import numpy as np
import pytest

from threshold_audit.errors import (
    BadParameter,
    DomainError,
    GroundSetTooLarge,
    TrivialFamily,
)
from threshold_audit.family import (
    MonotoneFamily,
    SetFamily,
    contains,
    covers,
    dual,
    dual_by_enumeration,
    from_sets,
    level_profile,
    membership_table,
    minimal_transversals,
    minimize,
    to_elements,
    to_mask,
    upset_of,
)
from threshold_audit.generators import TribesParams, dual_tribes, majority


def test_masks_round_trip_elements():
    assert to_mask([0, 2], 3) == 0b101
    assert to_elements(0b101) == (0, 2)
    with pytest.raises(DomainError):
        to_mask([3], 3)


def test_from_sets_drops_dominated_and_sorts():
    family = from_sets(4, [[0, 1, 2], [2, 3], [0, 1], [3, 2]])
    assert family.as_lists() == [[0, 1], [2, 3]]


def test_from_sets_verbose_logs_removals(caplog):
    with caplog.at_level("INFO", logger="threshold_audit"):
        from_sets(3, [[0], [0, 1]], verbose=True)
    assert "Removed 1" in caplog.text


@pytest.mark.parametrize("sets", [[], [[]]])
def test_trivial_families_rejected(sets):
    with pytest.raises(TrivialFamily):
        from_sets(3, sets)


def test_constructor_validates_canonical_antichain():
    with pytest.raises(BadParameter):
        MonotoneFamily(3, (0b11, 0b1))
    with pytest.raises(BadParameter):
        MonotoneFamily(3, (0b1, 0b11))
    with pytest.raises(GroundSetTooLarge):
        from_sets(65, [[0]])


def test_membership(majority3):
    assert contains(majority3, [0, 1])
    assert contains(majority3, [0, 1, 2])
    assert not contains(majority3, [2])
    table = membership_table(majority3)
    assert table.tolist() == [False, False, False, True, False, True, True, True]


def test_level_profile_majority(majority3):
    assert level_profile(majority3).counts == (0, 0, 3, 1)
    assert level_profile(majority(5)).counts == (0, 0, 0, 10, 5, 1)


def test_covers_and_upset(majority3):
    assert covers(majority3, SetFamily.from_lists(3, [[0], [1]]))
    assert not covers(majority3, SetFamily.from_lists(3, [[0]]))
    assert upset_of(SetFamily.from_lists(3, [[0, 1], [0]])).as_lists() == [[0]]


def test_minimize_keeps_equal_size_sets():
    assert minimize([0b011, 0b101, 0b110, 0b111]) == [0b011, 0b101, 0b110]


def test_majority_is_self_dual(majority3):
    assert dual(majority3) == majority3


def test_dual_of_subcube_is_or():
    family = from_sets(3, [[0, 1, 2]])
    assert dual(family).as_lists() == [[0], [1], [2]]


def test_dual_tribes_dual_is_tribes():
    star = dual(dual_tribes(TribesParams(4, 2)))
    assert star.as_lists() == [[0, 1], [2, 3]]


def test_minimal_transversals_of_triangle_edges():
    assert minimal_transversals([0b011, 0b110, 0b101]) == [0b011, 0b101, 0b110]


def test_dual_matches_enumeration(corpus):
    for family in corpus[:300]:
        assert dual(family) == dual_by_enumeration(family), family


def test_dual_is_an_involution(corpus):
    for family in corpus[:200]:
        assert dual(dual(family)) == family


def test_level_profile_counts_members(corpus):
    for family in corpus[:200]:
        assert sum(level_profile(family).counts) == int(membership_table(family).sum())


def test_family_and_dual_split_the_cube(corpus):
    # S is in F* exactly when its complement is not in F.
    for family in corpus[:200]:
        total = int(membership_table(family).sum()) + int(membership_table(dual(family)).sum())
        assert total == 2**family.n


def test_covers_agrees_with_enumeration(corpus):
    rng = np.random.default_rng(7)
    for family in corpus[:200]:
        n = family.n
        for _ in range(5):
            count = int(rng.integers(1, 5))
            masks = {int(mask) for mask in rng.integers(1, 1 << n, size=count)}
            generators = SetFamily(n, tuple(sorted(masks)))
            upset = membership_table(upset_of(generators))
            expected = bool(np.all(upset[membership_table(family)]))
            assert covers(family, generators) == expected, (family, generators)
