from collections import Counter

import numpy as np
import pytest

from eiscoh.config import DEFAULT_SEED
from eiscoh.errors import EnumerationCapExceeded, ShapeMismatchError, UnbalancedInfinityTypeError
from eiscoh.kostant import (
    InfinityType,
    Weight,
    bottom_degree,
    bottom_degree_profile,
    dot_action_doubled,
    find_wk,
    highest_weight_from_eta,
    kostant_census,
    kostant_weight,
    max_balanced_n,
    sigma_on_infinity_type,
    verify_unique_match,
)
from eiscoh.lchar import target_weight
from eiscoh.weyl import WeylElement, all_permutations, cycle, identity, q_integer_product, weyl_sigma_action


def test_from_values_labels():
    eta = InfinityType.from_values((0, 3, 4, -2))
    assert eta.labels == ("iota_1", "iotabar_1", "iota_2", "iotabar_2")
    assert eta.places == (("iota_1", "iotabar_1"), ("iota_2", "iotabar_2"))
    assert eta.degree == 4
    with pytest.raises(ShapeMismatchError):
        InfinityType.from_values((0, 3, 1))


def test_validate_rejects_regular_failures():
    with pytest.raises(UnbalancedInfinityTypeError, match="strictly between"):
        InfinityType.from_values((1, 3)).validate(3)
    with pytest.raises(UnbalancedInfinityTypeError, match="not balanced"):
        InfinityType.from_values((-1, 0)).validate(3)
    with pytest.raises(UnbalancedInfinityTypeError, match="not balanced"):
        InfinityType.from_values((4, 3)).validate(3)


def test_max_balanced_n():
    assert max_balanced_n(InfinityType.from_values((0, 3))) == 3
    assert max_balanced_n(InfinityType.from_values((-1, 4, 0, 2))) == 2
    assert max_balanced_n(InfinityType.from_values((1, 3))) is None


def test_highest_weight(eta_n3):
    mu = highest_weight_from_eta(eta_n3, 3)
    assert mu["iota_1"] == (0, 0, 0)
    assert mu["iotabar_1"] == (1, 1, 1)
    assert mu.is_dominant()


def test_find_wk_closed_form(eta_n3):
    w = find_wk(eta_n3, 1, 3)
    assert w["iota_1"] == cycle(1, 3).inverse()
    assert w["iota_1"].one_line() == [3, 1, 2]
    assert w["iotabar_1"] == identity(3)
    assert w.length() == bottom_degree(3, 2) == 2


def test_find_wk_matches_target_weight(eta_n3):
    mu = highest_weight_from_eta(eta_n3, 3)
    for k in range(1, 4):
        assert kostant_weight(find_wk(eta_n3, k, 3), mu) == target_weight(eta_n3, k, 3)


def test_find_wk_rejects_bad_k(eta_n3):
    with pytest.raises(ValueError):
        find_wk(eta_n3, 0, 3)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_dot_action_identity(n):
    for vec in [(0,) * n, tuple(range(n, 0, -1)), (3,) + (0,) * (n - 1)]:
        mu = Weight({"iota": vec})
        for w in all_permutations(n):
            element = WeylElement({"iota": w})
            assert kostant_weight(element, mu).scaled(2) == dot_action_doubled(element, mu)


def test_kostant_weight_shape_mismatch():
    w = WeylElement({"iota": identity(3)})
    with pytest.raises(ShapeMismatchError):
        kostant_weight(w, Weight({"iota": (0, 0)}))


@pytest.mark.parametrize(
    "n, values",
    [
        (2, (0, 2)),
        (2, (3, -1)),
        (3, (-1, 3)),
        (3, (0, 3, 4, -2)),
        (4, (5, 0)),
        (4, (0, 4, 0, 4)),
    ],
)
def test_unique_bottom_degree_match(n, values):
    eta = InfinityType.from_values(values)
    for k in range(1, n + 1):
        report = verify_unique_match(eta, k, n)
        assert report["status"] == "PASS"
        assert report["match_count"] == 1
        assert report["min_length"] == report["c_n"] == bottom_degree(n, len(values))
        assert report["matches"][0] == find_wk(eta, k, n).to_dict()


@pytest.mark.slow
def test_exhaustive_agrees_with_factorized():
    eta = InfinityType.from_values((0, 3, 4, -1))
    for k in range(1, 4):
        exhaustive = verify_unique_match(eta, k, 3, exhaustive=True)
        factorized = verify_unique_match(eta, k, 3, threads=2)
        assert exhaustive["matches"] == factorized["matches"]
        assert exhaustive["strategy"] == "exhaustive"


def test_enumeration_cap():
    eta = InfinityType.from_values((0, 4, 0, 4))
    with pytest.raises(EnumerationCapExceeded):
        verify_unique_match(eta, 1, 4, cap=100)


def test_bottom_degree_profile(eta_n3):
    assert bottom_degree_profile(eta_n3, 2, 3) == {2: 1}


@pytest.mark.parametrize("n, degree", [(2, 2), (3, 2), (3, 4), (4, 2)])
def test_census(n, degree):
    census = kostant_census(n, degree)
    assert census["status"] == "PASS"
    assert sum(census["counted"]) == census["total"]


def test_census_counts_every_tuple():
    permutations = list(all_permutations(3))
    brute = Counter(a.length() + b.length() for a in permutations for b in permutations)
    census = kostant_census(3, 2)
    assert census["counted"] == [brute[q] for q in range(len(census["counted"]))]
    assert census["total"] == 36


def test_census_cap():
    with pytest.raises(EnumerationCapExceeded, match="census cap"):
        kostant_census(4, 4, cap=1000)


@pytest.mark.slow
def test_census_n5_degree4():
    census = kostant_census(5, 4)
    assert census["status"] == "PASS"
    assert census["counted"] == q_integer_product(5, copies=4)
    assert census["total"] == 120**4


def test_sigma_on_infinity_type(gauss):
    labels = gauss.embeddings.labels
    eta = InfinityType(dict(zip(labels, (0, 3))), gauss.places())
    twisted = sigma_on_infinity_type(eta, gauss.conjugation())
    assert twisted.values() == [3, 0]
    assert sigma_on_infinity_type(eta, gauss.identity()) == eta


def random_balanced(rng, n, degree):
    values = []
    for _ in range(degree // 2):
        pair = [int(rng.integers(-3, 1)), int(rng.integers(n, n + 4))]
        if rng.random() < 0.5:
            pair.reverse()
        values += pair
    return InfinityType.from_values(values)


@pytest.mark.slow
@pytest.mark.parametrize("degree, ns", [(2, (2, 3, 4)), (4, (2, 3))])
def test_unique_match_random_balanced(degree, ns):
    rng = np.random.default_rng(DEFAULT_SEED)
    for _ in range(50):
        n = int(rng.choice(ns))
        eta = random_balanced(rng, n, degree)
        eta.validate(n)
        for k in range(1, n + 1):
            report = verify_unique_match(eta, k, n, exhaustive=True)
            assert report["match_count"] == 1, (eta, k)
            assert report["matches"][0] == find_wk(eta, k, n).to_dict()


def test_sigma_actions_compose(zeta5):
    labels = zeta5.embeddings.labels
    eta = InfinityType(dict(zip(labels, (0, 2, 3, -1))), zeta5.places())
    w = find_wk(eta, 1, 2)
    elements = zeta5.sigma_set()
    for s in elements:
        for t in elements:
            st = s * t
            assert sigma_on_infinity_type(sigma_on_infinity_type(eta, t), s) == sigma_on_infinity_type(eta, st)
            assert weyl_sigma_action(weyl_sigma_action(w, t), s) == weyl_sigma_action(w, st)
