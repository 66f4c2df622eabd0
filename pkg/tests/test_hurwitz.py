from fractions import Fraction
from itertools import product
from math import factorial

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tropilift.errors import RefusedComputation, ValidationError
from tropilift.hurwitz import (HurwitzQuery, a_set_nonempty, compose, conjugacy_class,
                               count_brute, count_dp, cycle_type, expected_R, hurwitz_count,
                               hurwitz_number, inverse, is_tame_query, min_source_genus,
                               no_degree4_profile_221_31, partition, symmetric_group)


def test_partition_normalization():
    assert partition("2,2") == (2, 2)
    assert partition([1, 3]) == (3, 1)
    with pytest.raises(ValidationError):
        partition([0, 2])
    with pytest.raises(ValidationError):
        HurwitzQuery(0, 0, 4, ((2, 1),))


def test_permutation_helpers():
    p = (1, 2, 0)
    assert compose(p, inverse(p)) == (0, 1, 2)
    assert cycle_type(p) == (3,)
    assert len(conjugacy_class(4, (2, 2))) == 3
    assert len(conjugacy_class(4, (3, 1))) == 8
    assert sum(len(conjugacy_class(4, partition(m))) for m in
               ["4", "3,1", "2,2", "2,1,1", "1,1,1,1"]) == 24


def test_expected_R():
    assert expected_R(HurwitzQuery(0, 0, 4, ("2,2", "2,2", "3,1"))) == 0
    assert expected_R(HurwitzQuery(3, 0, 2)) == 8
    assert expected_R(HurwitzQuery(1, 0, 3, ("3", "3", "3"))) == 0


def test_profile_221_31_vanishes():
    q = HurwitzQuery(0, 0, 4, ("2,2", "2,2", "3,1"))
    assert hurwitz_number(q, "brute") == 0 == hurwitz_number(q, "dp")
    assert no_degree4_profile_221_31()


@pytest.mark.parametrize("g", [0, 1, 2, 3])
def test_degree_two_is_one_half(g):
    assert hurwitz_number(HurwitzQuery(g, 0, 2)) == Fraction(1, 2)


def test_three_cycles_hand_count():
    # tuples (s1, s2, s3) of 3-cycles with product id: s2 is either 3-cycle, s1 then
    # must equal s2 (so s3 = s2^{-2} = s2 is a 3-cycle), giving 2 tuples / 3! = 1/3
    q = HurwitzQuery(1, 0, 3, ("3", "3", "3"))
    hand = 0
    for a, b in product(conjugacy_class(3, (3,)), repeat=2):
        c = inverse(compose(a, b))
        hand += cycle_type(c) == (3,)
    assert hand == 2
    assert hurwitz_number(q) == Fraction(hand, 6) == Fraction(1, 3)


@pytest.mark.parametrize("d", range(2, 7))
def test_power_map_exists(d):
    assert a_set_nonempty(HurwitzQuery(0, 0, d, ((d,), (d,))))


def test_refusals():
    with pytest.raises(RefusedComputation, match="negative"):
        hurwitz_number(HurwitzQuery(0, 0, 3, ("3", "3", "3")))
    with pytest.raises(RefusedComputation, match="wild"):
        hurwitz_number(HurwitzQuery(0, 0, 2, ("2", "2"), char_p=2))
    with pytest.raises(RefusedComputation):
        hurwitz_number(HurwitzQuery(0, 0, 3, ("3", "3"), char_p=2))
    assert hurwitz_number(HurwitzQuery(0, 0, 2, ("2", "2"), char_p=3)) == Fraction(1, 2)
    with pytest.raises(ValueError):
        hurwitz_count(HurwitzQuery(0, 0, 2), method="magic")


def test_tame_query():
    assert is_tame_query(HurwitzQuery(0, 0, 3, ("3", "3"), char_p=2))
    assert not is_tame_query(HurwitzQuery(0, 0, 2, ("2", "2"), char_p=2))


def test_min_source_genus():
    assert min_source_genus(0, 4, ["2,2", "2,2", "3,1"], 3) == 1
    assert min_source_genus(0, 3, ["3", "3"], 3) == 0
    assert min_source_genus(0, 4, ["2,2", "2,2", "3,1"], 0) is None


def test_non_transitive_count_includes_disconnected():
    q = HurwitzQuery(0, 0, 2)
    # R = 2: (t, t) counted whether or not we require transitivity; d=1 trivially
    assert count_brute(q, transitive=False) >= count_brute(q)
    assert count_dp(HurwitzQuery(0, 0, 1), transitive=False) == 1


def _queries():
    def build(d, gt, gs, k, seed):
        import random
        rng = random.Random(seed)
        parts = []
        for _ in range(k):
            n, p = d, []
            while n:
                x = rng.randint(1, n)
                p.append(x)
                n -= x
            parts.append(tuple(p))
        return d, gt, gs, parts
    return st.builds(build, st.integers(1, 4), st.integers(0, 1), st.integers(0, 2),
                     st.integers(0, 3), st.integers(0, 10**6))


@given(_queries())
@settings(max_examples=40)
def test_brute_and_dp_agree(args):
    d, gt, gs, parts = args
    q = HurwitzQuery(gs, gt, d, tuple(parts))
    R = expected_R(q)
    if R < 0 or R > 4 or (gt and d > 3):
        return
    assert count_brute(q) == count_dp(q)
    assert count_brute(q, False) == count_dp(q, False)


def test_brute_and_dp_agree_degree_four_sweep():
    ps = ["4", "3,1", "2,2", "2,1,1"]
    for a in ps:
        for b in ps:
            q = HurwitzQuery(0, 0, 4, (a, b, "3,1"))
            R = expected_R(q)
            if 0 <= R <= 2:
                assert count_brute(q) == count_dp(q), (a, b)


def test_total_count_of_unbranched_cover_of_torus():
    # degree-2 unbranched covers of a torus by a genus-1 curve: (a, b) in S2^2
    # transitive pairs are the 3 with at least one transposition; 3 / 2 = 3/2
    assert hurwitz_number(HurwitzQuery(1, 1, 2)) == Fraction(3, 2)
    assert factorial(2) == len(symmetric_group(2))
