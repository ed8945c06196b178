import math

import pytest

from sunflowers import (
    SetFamily,
    brute_force_sunflower,
    deza_extract,
    find_any,
    intersection_profile,
    is_sunflower,
    l_intersecting_find,
    l_multinomial_bound,
)
from sunflowers.finders import (
    BelowDezaThresholdError,
    FinderError,
    NotUniformError,
    ProfileNotSingletonError,
)
from sunflowers.generators import (
    gen_all_k_subsets,
    gen_random_L_intersecting,
    gen_random_uniform,
    gen_single_intersection,
    gen_sunflower,
    gen_transversal,
)

from _oracles import has_sunflower_by_full_scan

TRIANGLE = SetFamily(3, [[0, 1], [1, 2], [0, 2]])


# -- brute force ------------------------------------------------------------

def test_brute_force_disjoint_family():
    fam = SetFamily(8, [[0, 1], [2, 3], [4, 5], [6, 7]])
    flower = brute_force_sunflower(fam, 3)
    assert flower.core.elements == ()
    assert [s.elements for s in flower.petal_sets] == [(0, 1), (2, 3), (4, 5)]


def test_brute_force_triangle_absent():
    assert brute_force_sunflower(TRIANGLE, 3) is None


def test_brute_force_transversal_2x2_absent():
    fam = gen_transversal(2, 2)
    assert [s.elements for s in fam.members] == [(0, 2), (0, 3), (1, 2), (1, 3)]
    assert brute_force_sunflower(fam, 3) is None
    assert not has_sunflower_by_full_scan([s.elements for s in fam.members], 3)


def test_brute_force_agrees_with_oracle_on_random_families():
    for seed in range(25):
        fam = gen_random_uniform(9, 3, 14, seed=seed)
        ours = brute_force_sunflower(fam, 3)
        oracle = has_sunflower_by_full_scan([s.elements for s in fam.members], 3)
        assert (ours is not None) == oracle
        if ours is not None:
            assert is_sunflower(ours.petal_sets) == ours.core


# -- Deza extraction ------------------------------------------------------------

def test_deza_at_threshold_disjoint():
    # n = 2, t = 0: four disjoint 2-sets sit exactly at the n^2-n+2 = 4 threshold
    fam = SetFamily(8, [[0, 1], [2, 3], [4, 5], [6, 7]])
    flower = deza_extract(fam, 3)
    assert flower.core.elements == () and flower.r == 3


def test_deza_star():
    fam = SetFamily(5, [[0, 1], [0, 2], [0, 3], [0, 4]])
    flower = deza_extract(fam, 4)
    assert flower.core.elements == (0,) and flower.r == 4


def test_deza_triangle_below_threshold():
    # size 3 = n^2-n+1: one below the threshold, and indeed not a sunflower
    with pytest.raises(BelowDezaThresholdError):
        deza_extract(TRIANGLE, 3)
    assert brute_force_sunflower(TRIANGLE, 3) is None


def test_deza_threshold_cannot_drop_at_n2():
    # the triangle witnesses sharpness: a singleton-profile family of size
    # n^2-n+1 that is not a sunflower
    assert intersection_profile(TRIANGLE) == {1}
    assert is_sunflower(TRIANGLE.members) is None


def test_deza_error_codes_distinct():
    mixed = SetFamily(6, [[0, 1], [0, 2], [3, 4], [0, 5]])  # profile {0, 1}
    with pytest.raises(ProfileNotSingletonError):
        deza_extract(mixed, 2)
    with pytest.raises(NotUniformError):
        deza_extract(SetFamily(4, [[0], [1, 2], [2, 3], [0, 3]]), 2)
    with pytest.raises(FinderError):
        deza_extract(TRIANGLE, 1)


def test_deza_single_intersection_fixture_meets_threshold():
    fam = gen_single_intersection(3, 1, 8)  # n^2-n+2 = 8
    flower = deza_extract(fam, 3)
    assert len(flower.core) == 1


# -- recursive extractor ----------------------------------------------------------

def test_base_case_seven_disjoint_pairs():
    fam = SetFamily(14, [[2 * i, 2 * i + 1] for i in range(7)])
    assert len(fam) == 7 > l_multinomial_bound(2, [0], 3) == 6
    flower, trace = l_intersecting_find(fam, [0], 3)
    assert flower is not None and flower.core.elements == ()
    assert trace.found and trace.levels[-1].outcome == "base-extracted"


def test_two_sizes_star():
    fam = SetFamily(4, [[0, 1], [0, 2], [0, 3]])
    flower, trace = l_intersecting_find(fam, [0, 1], 3)
    assert flower is not None and flower.core.elements == (0,)
    assert [lvl.outcome for lvl in trace.levels] == ["recursed", "base-extracted"]
    top = trace.levels[0]
    assert top.pivot == (0, 1) and top.pivot_link == (0,)
    assert top.filtered_size == 3 and top.link_size == 3


def test_too_few_sets_is_structured_not_error():
    fam = SetFamily(4, [[0, 1], [2, 3]])
    flower, trace = l_intersecting_find(fam, [0], 3)
    assert flower is None and not trace.found
    assert trace.levels[0].outcome == "too-few-sets"


def test_preconditions():
    with pytest.raises(FinderError):
        l_intersecting_find(TRIANGLE, [], 3)
    with pytest.raises(FinderError):
        l_intersecting_find(TRIANGLE, [2], 3)  # sizes must stay below n
    with pytest.raises(FinderError):
        l_intersecting_find(TRIANGLE, [0], 3)  # family is {1}-intersecting
    with pytest.raises(NotUniformError):
        l_intersecting_find(SetFamily(4, [[0], [1, 2]]), [0], 2)
    with pytest.raises(FinderError):
        l_intersecting_find(TRIANGLE, [1], 1)


GUARANTEE_CASES = [
    # (family, L): families strictly above the multinomial threshold
    (SetFamily(14, [[2 * i, 2 * i + 1] for i in range(7)]), [0]),
    (gen_all_k_subsets(7, 2), [0, 1]),  # 21 > 18
    (gen_single_intersection(2, 1, 5), [1]),  # 5 > 3
    (gen_single_intersection(3, 2, 8), [2]),  # 8 > 7
    (gen_single_intersection(3, 1, 22), [1]),  # 22 > 21
    (SetFamily(66, [[3 * i, 3 * i + 1, 3 * i + 2] for i in range(22)]), [0]),  # 22 > 21
]


@pytest.mark.parametrize("fam,L", GUARANTEE_CASES)
def test_guarantee_above_threshold(fam, L):
    n = fam.uniformity
    assert len(fam) > l_multinomial_bound(n, L, 3)
    flower, trace = l_intersecting_find(fam, L, 3)
    assert flower is not None and trace.found
    member_masks = set(fam.masks)
    assert all(s.mask in member_masks for s in flower.petal_sets)
    assert is_sunflower(flower.petal_sets) == flower.core
    assert brute_force_sunflower(fam, 3) is not None


def test_trace_pigeonhole_arithmetic():
    corpus = [
        (gen_all_k_subsets(7, 2), [0, 1]),
        (gen_all_k_subsets(6, 3), [0, 1, 2]),
        (gen_random_L_intersecting(10, 3, [0, 1], 12, seed=5), [0, 1]),
    ]
    for fam, L in corpus:
        flower, trace = l_intersecting_find(fam, L, 3)
        assert len(trace.levels) <= len(L)
        for lvl in trace.levels:
            if lvl.outcome in ("recursed",):
                l1 = lvl.L[0]
                assert lvl.filtered_size * lvl.m >= lvl.family_size
                assert lvl.link_size * math.comb(lvl.n, l1 + 1) >= lvl.filtered_size
                assert len(lvl.subfamily) <= lvl.m


def test_soundness_on_random_corpus():
    for seed in range(40):
        fam = gen_random_uniform(10, 3, 16, seed=seed)
        L = sorted(intersection_profile(fam))
        if not L:
            continue
        flower, _ = l_intersecting_find(fam, L, 3)
        if flower is not None:
            member_masks = set(fam.masks)
            assert all(s.mask in member_masks for s in flower.petal_sets)
            assert is_sunflower(flower.petal_sets) == flower.core
            assert brute_force_sunflower(fam, 3) is not None


# -- dispatcher ---------------------------------------------------------------------

def test_find_any_on_sunflower_family():
    fam = gen_sunflower(2, 1, 4)
    outcome = find_any(fam, 3)
    assert outcome.status == "found"
    assert is_sunflower(outcome.sunflower.petal_sets) == outcome.sunflower.core


def test_find_any_triangle_definitive_absent():
    outcome = find_any(TRIANGLE, 3)
    assert outcome.status == "absent" and outcome.method == "brute-force"


def test_find_any_budget_exceeded_is_unknown():
    fam = gen_all_k_subsets(10, 5)  # 252 members
    outcome = find_any(fam, 3, strategy="brute", budget=10)
    assert outcome.status == "unknown" and "budget" in outcome.note


def test_find_any_recursive_only_never_claims_absent():
    outcome = find_any(TRIANGLE, 3, strategy="recursive")
    assert outcome.status == "unknown"


def test_find_any_agrees_with_brute_on_random_family():
    fam = gen_random_uniform(30, 3, 60, seed=1)
    outcome = find_any(fam, 3)
    brute = brute_force_sunflower(fam, 3)
    assert (outcome.status == "found") == (brute is not None)


def test_find_any_validates():
    with pytest.raises(FinderError):
        find_any(TRIANGLE, 1)
    with pytest.raises(FinderError):
        find_any(TRIANGLE, 3, strategy="magic")
