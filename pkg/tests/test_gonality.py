import pytest

from tropilift.errors import ValidationError
from tropilift.fixtures import star_map, tate_isogeny
from tropilift.gonality import (SearchBudget, _TreeSearch, _split, accept, gonality_witness,
                                lift_obstructed_gonality, search_morphism_to_tree,
                                tropical_gonality_upper)
from tropilift.graph import MetricGraph, banana, circle, first_betti, path, point_graph
from tropilift.harmonic import degree
from tropilift.hyperelliptic import canonical_subdivision

from shapes import dumbbell, figure_eight, k4


def test_budget_validation_and_cap(monkeypatch):
    with pytest.raises(ValidationError):
        SearchBudget(node_limit=0)
    monkeypatch.setenv("TROPILIFT_NODE_LIMIT", "10")
    assert SearchBudget.default().node_limit == 10
    monkeypatch.delenv("TROPILIFT_NODE_LIMIT")
    assert SearchBudget.default().node_limit == SearchBudget().node_limit


def test_trees_have_gonality_one():
    d, phi = gonality_witness(path(3))
    assert d == 1 and accept(phi, None, 1)
    star = MetricGraph.build(["c", "a", "b", "e"], [("1", "c", "a", 1), ("2", "c", "b", 2),
                                                   ("3", "c", "e", 3)])
    assert tropical_gonality_upper(star) == 1


@pytest.mark.parametrize("m", [circle(2), circle(5), banana(1, 1, 1, 1), banana(1, 2, 3),
                               figure_eight(), dumbbell(), point_graph(2)],
                         ids=["c2", "c5", "B1111", "B123", "eight", "dumbbell", "pt2"])
def test_degree_two_graphs(m):
    d, phi = gonality_witness(m)
    assert d == 2
    assert accept(phi, None, 2)
    assert first_betti(phi.target) == 0 and degree(phi) == 2


def test_weighted_vertex_cases():
    g1g1 = MetricGraph.build(["a", "b"], [("e", "a", "b", 1)], {"a": 1, "b": 1})
    assert tropical_gonality_upper(g1g1) == 2
    # a genus-1 vertex forbids degree 1 even on a tree
    assert search_morphism_to_tree(g1g1, d=1) is None


def test_k4_upper_bound():
    # no tropical modifications are attached, so the bound is not sharp here
    d = tropical_gonality_upper(k4())
    assert d is not None and 3 <= d <= 4


@pytest.mark.parametrize("m", [circle(2), banana(1, 1, 1), banana(1, 1, 1, 1)],
                         ids=["c2", "B111", "B1111"])
def test_tree_search_alone_finds_degree_two(m):
    G = canonical_subdivision(m).graph
    found = [phi for phi in _TreeSearch(G, 2, SearchBudget(), [0]).run()
             if accept(phi, G.genus, 2)]
    assert found


def test_budget_monotone():
    small = SearchBudget(node_limit=3)
    big = SearchBudget()
    for m in [banana(1, 1, 1), circle(4)]:
        a = tropical_gonality_upper(m, budget=small)
        b = tropical_gonality_upper(m, budget=big)
        assert b is not None
        assert a is None or a >= b


def test_small_budget_can_fail_on_generic_search():
    m = k4()
    assert search_morphism_to_tree(m, d=3, budget=SearchBudget(node_limit=3)) is None


def test_split():
    G = _split(circle(2), 3)
    assert len(G.edges) == 6 and G.total_length() == circle(2).total_length()


def test_accept_rejects():
    assert not accept(tate_isogeny())                      # target not a tree
    assert not accept(star_map(), None, 3)                 # wrong degree
    d, phi = gonality_witness(path(2))
    assert not accept(phi, {v: 1 for v in phi.source.vertices}, 1)


def test_input_guard():
    m = MetricGraph.build(["a", "z"], [("e", "a", "z", "inf")], infinite=["z"])
    with pytest.raises(ValidationError):
        tropical_gonality_upper(m)


def test_obstruction_summary():
    out = lift_obstructed_gonality(None, None, star_map())
    assert out["obstructed"] == ["p"] and out["certifies_witness_not_liftable"]
    assert out["degree"] == 4
    d, phi = gonality_witness(banana(1, 1, 1))
    out = lift_obstructed_gonality(None, None, phi)
    assert out["liftable"] and not out["obstructed"]
