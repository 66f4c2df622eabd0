import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tropilift.errors import ValidationError
from tropilift.fixtures import hyper_family
from tropilift.generators import random_graph
from tropilift.graph import MetricGraph, Point, banana, genus, point_graph
from tropilift.harmonic import degree, is_effective, is_harmonic, validate_morphism
from shapes import dumbbell, figure_eight, k4
from tropilift.hyperelliptic import (bridge_counts, canonical_subdivision, essential_model,
                                     find_hyperelliptic_involution, hyperelliptic_involutions,
                                     is_hyperelliptic, is_hyperelliptic_by_rank, is_minimal,
                                     kappa, liftable_hyperelliptic, quotient_morphism)


def test_minimality():
    assert not is_minimal(MetricGraph.build(["a", "b"], [("e", "a", "b", 1)]))
    assert is_minimal(MetricGraph.build(["a", "b"], [("e", "a", "b", 1)], {"a": 1, "b": 1}))
    with pytest.raises(ValidationError, match="not minimal"):
        hyperelliptic_involutions(MetricGraph.build(
            ["a", "b", "c"], [("e1", "a", "b", 1), ("e2", "b", "b", 1), ("e3", "a", "c", 1)],
            {"b": 2}))
    with pytest.raises(ValidationError, match="genus"):
        hyperelliptic_involutions(banana(1, 1))


def test_essential_model_smooths_valence_two():
    m = MetricGraph.build(["u", "w", "s"], [("x", "u", "s", 1), ("y", "s", "w", 2),
                                            ("z", "u", "w", 3), ("t", "u", "w", 3)])
    keep, edges, inside = essential_model(m)
    assert keep == ["u", "w"] and sorted(e[3] for e in edges) == [3, 3, 3]
    C = canonical_subdivision(m)
    assert C.location["s"] == Point.on(next(f"{e[0]}/0" for e in edges if "s" in inside and
                                            e[0] == inside["s"][0]), 1)


def test_banana_involution():
    s = find_hyperelliptic_involution(banana(1, 1, 1, 1))
    assert s is not None
    assert s.vmap["u"] == "w" and all(s.vmap[f"E{i}/m"] == f"E{i}/m" for i in range(4))
    phi = quotient_morphism(s)
    assert validate_morphism(phi) == [] and is_harmonic(phi) and degree(phi) == 2
    assert is_effective(phi)
    assert all(kappa(s, f"E{i}/m") == 0 for i in range(4))
    with pytest.raises(ValidationError, match="not fixed"):
        kappa(s, "u")


@pytest.mark.parametrize("m", [banana(1, 1, 1, 1), banana(1, 2, 3), figure_eight(), dumbbell(),
                               point_graph(2), point_graph(3)],
                         ids=["B1111", "B123", "eight", "dumbbell", "pt2", "pt3"])
def test_hyperelliptic_examples(m):
    assert is_hyperelliptic(m)
    assert is_hyperelliptic_by_rank(m)
    s = find_hyperelliptic_involution(m)
    phi = quotient_morphism(s)
    assert validate_morphism(phi) == [] and degree(phi) == 2


@pytest.mark.parametrize("ls", [None, [1, 2, 3, 4, 5, 6]], ids=["unit", "generic"])
def test_k4_not_hyperelliptic(ls):
    assert not is_hyperelliptic(k4(ls))
    assert not is_hyperelliptic_by_rank(k4(ls))
    assert liftable_hyperelliptic(k4(ls)) is False


def test_kappa_on_fixed_edge_interior():
    s = find_hyperelliptic_involution(dumbbell())
    br = next(e for e in s.graph.edges.values() if {"a", "b"} & set(e.ends)
              and s.vmap[e.ends[0]] == e.ends[0] and s.vmap[e.ends[1]] == e.ends[1])
    assert kappa(s, Point.on(br.id, br.length / 2)) == 2


@pytest.mark.parametrize("k", range(1, 6))
@pytest.mark.parametrize("g", range(0, 3))
def test_hyper_family(k, g):
    m = hyper_family(k, g)
    if not is_minimal(m):
        # a genus-0 leaf at the centre
        assert (k, g) == (1, 0)
        return
    rep = liftable_hyperelliptic(m, report=True)
    assert rep.hyperelliptic
    assert rep.liftable == (2 * g >= k - 2)
    # for k = 2, g = 0 the centre is smoothed away and sits inside a fixed edge
    assert kappa(rep.involution, "p") == k
    assert bridge_counts(m)["p"] == k


def test_kappa_three_genus_zero_fails():
    assert not liftable_hyperelliptic(hyper_family(3, 0))
    assert liftable_hyperelliptic(hyper_family(2, 0))


def _random_minimal(seed):
    rng = random.Random(seed)
    nv = rng.randint(2, 5)
    m = random_graph(rng, nv, rng.randint(0, 8 - (nv - 1)), max_len=2)
    g = {v: (rng.randint(1, 2) if m.valence(v) == 1 else rng.choice([0, 0, 0, 1]))
         for v in m.vertices}
    return m, g


@given(st.integers(0, 10**6))
@settings(max_examples=60)
def test_rank_and_involution_agree(seed):
    m, g = _random_minimal(seed)
    if genus(m, g) < 2 or not is_minimal(m, g):
        return
    assert len(m.edges) <= 8
    s = find_hyperelliptic_involution(m, g)
    assert (s is not None) == is_hyperelliptic_by_rank(m, g)
    if s is not None:
        phi = quotient_morphism(s)
        assert validate_morphism(phi) == [] and degree(phi) == 2
        rep = liftable_hyperelliptic(m, g, report=True)
        assert rep.liftable == all(2 * s.graph.genus.get(v, 0) >= k - 2
                                   for v, k in rep.kappa.items())
