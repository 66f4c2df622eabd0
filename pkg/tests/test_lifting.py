import pytest

from tropilift.errors import RefusedComputation, ValidationError
from tropilift.fixtures import fold_circle, identity, star_map, tate_isogeny
from tropilift.graph import MetricGraph, circle, path
from tropilift.harmonic import Contracted, Morphism
from tropilift.lifting import (check_tame_covering_shadow, genus_relaxed_lift,
                               liftable_augmented, vertex_report)


def test_star_map_is_obstructed_at_centre_only():
    ok, reports = liftable_augmented(star_map())
    assert not ok
    assert [r.vertex for r in reports if r.verdict == "obstructed"] == ["p"]
    centre = next(r for r in reports if r.vertex == "p")
    assert centre.hurwitz == 0 and centre.R == 0
    assert sorted(centre.partitions) == [(2, 2), (2, 2), (3, 1)]
    assert centre.as_dict()["hurwitz"] == "0"


def test_star_map_genus_relaxed():
    sol = genus_relaxed_lift(star_map(), g_max=3)
    assert sol is not None and sol["p"] >= 1
    phi = star_map()
    gs = dict(sol)
    ok, _ = liftable_augmented(phi, gs)
    assert ok


def test_genus_relaxed_gives_up_within_small_bound():
    assert genus_relaxed_lift(star_map(), g_max=0) is None


def test_tate_lifts_in_odd_characteristic():
    ok, reports = liftable_augmented(tate_isogeny())
    assert ok
    assert all(r.reason == "z -> z^d" for r in reports)
    assert liftable_augmented(tate_isogeny(), char_p=3)[0]
    with pytest.raises(RefusedComputation):
        liftable_augmented(tate_isogeny(), char_p=2)


def test_identity_and_fold():
    assert liftable_augmented(identity(circle(3)))[0]
    ok, reports = liftable_augmented(fold_circle())
    assert ok


def test_degree_one_needs_equal_genera():
    phi = identity(path(1))
    r = vertex_report(phi, "v0", {"v0": 1}, {"v0": 0})
    assert r.verdict == "obstructed"


def test_preflight_errors():
    S = MetricGraph.build(["a", "b", "c"], [("e", "a", "b", 1), ("k", "b", "c", 1)])
    phi = Morphism(S, path(1), {"a": "v0", "b": "v1", "c": "v1"},
                   {"e": "e0", "k": Contracted("v1")}, {"e": 1, "k": 0})
    with pytest.raises(ValidationError, match="not finite"):
        liftable_augmented(phi)
    # tripod folded twice onto a tripod is not effective in genus 0
    T = MetricGraph.build(["x", "y1", "y2", "y3"], [(f"f{i}", "x", f"y{i}", 2) for i in (1, 2, 3)])
    S = MetricGraph.build(["p", "q1", "q2", "q3"], [(f"e{i}", "p", f"q{i}", 1) for i in (1, 2, 3)])
    bad = Morphism(S, T, {"p": "x", **{f"q{i}": f"y{i}" for i in (1, 2, 3)}},
                   {f"e{i}": f"f{i}" for i in (1, 2, 3)}, {f"e{i}": 2 for i in (1, 2, 3)})
    with pytest.raises(ValidationError, match="not effective"):
        liftable_augmented(bad)
    ok, reports = liftable_augmented(bad, {"p": 1})
    assert ok


def test_tame_covering_shadow():
    assert check_tame_covering_shadow(star_map())
    assert check_tame_covering_shadow(tate_isogeny(), char_p=3)
    assert not check_tame_covering_shadow(tate_isogeny(), char_p=2)
