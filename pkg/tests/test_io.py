import json
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from tropilift.errors import ParseError, ValidationError
from tropilift.fixtures import ribet, star_map, tate_isogeny
from tropilift.generators import random_harmonic_morphism
from tropilift.graph import Divisor, Point, banana, circle
from tropilift.io import (dumps, graph_to_dot, load_json, morphism_to_dot, parse_bundle,
                          parse_divisor, parse_graph, parse_morphism, parse_rational,
                          serialize_bundle, serialize_divisor, serialize_graph,
                          serialize_morphism)


def test_parse_rational():
    assert parse_rational("3/4") == Fraction(3, 4)
    assert parse_rational(2) == 2
    with pytest.raises(ParseError):
        parse_rational(0.5)
    with pytest.raises(ParseError):
        parse_rational("3/0")
    with pytest.raises(ParseError):
        parse_rational("inf")
    with pytest.raises(ParseError):
        parse_rational(True)


def test_graph_round_trip():
    m = banana(1, Fraction(2, 3), 5)
    data = json.loads(dumps(serialize_graph(m)))
    m2 = parse_graph(data)
    assert serialize_graph(m2) == serialize_graph(m)


def test_graph_errors_have_pointers():
    good = serialize_graph(circle(2))
    bad = json.loads(json.dumps(good))
    bad["edges"][0]["ends"][1] = "nope"
    with pytest.raises(ParseError) as ei:
        parse_graph(bad)
    assert ei.value.path == "/edges/0/ends/1"
    bad = json.loads(json.dumps(good))
    bad["edges"][1]["length"] = 1.5
    with pytest.raises(ParseError) as ei:
        parse_graph(bad)
    assert ei.value.path == "/edges/1/length"
    bad = json.loads(json.dumps(good))
    bad["vertices"].append({"id": "v0"})
    with pytest.raises(ParseError, match="duplicate"):
        parse_graph(bad)
    bad = json.loads(json.dumps(good))
    bad["edges"][0]["length"] = "0/1"
    with pytest.raises(ValidationError):
        parse_graph(bad)


def test_bundle_round_trip_fixtures():
    for phi in (tate_isogeny(), star_map(), ribet()):
        text = dumps(serialize_bundle(phi))
        psi = parse_bundle(load_json(text))
        assert dumps(serialize_bundle(psi)) == text


def test_morphism_errors():
    phi = tate_isogeny()
    data = serialize_morphism(phi)
    data["vertex_map"]["zz"] = "y"
    with pytest.raises(ParseError) as ei:
        parse_morphism(data, phi.source, phi.target)
    assert ei.value.path == "/vertex_map/zz"
    data = serialize_morphism(phi)
    data["edge_degree"]["e1"] = 1
    with pytest.raises(ValidationError):
        parse_morphism(data, phi.source, phi.target)
    with pytest.raises(ParseError) as ei:
        parse_bundle({"source": {}, "target": {}})
    assert ei.value.path == "/morphism"


def test_divisor_round_trip_and_errors():
    m = circle(2, 2)
    D = Divisor({"v0": 2, Point.on("e1", Fraction(1, 3)): -1})
    assert parse_divisor(serialize_divisor(D), m) == D
    with pytest.raises(ParseError) as ei:
        parse_divisor([{"at": {"edge": "e0", "offset": "5"}, "coeff": 1}], m)
    assert ei.value.path == "/0/at/offset"
    with pytest.raises(ParseError):
        parse_divisor([{"at": {"vertex": "q"}, "coeff": 1}], m)


def test_invalid_json():
    with pytest.raises(ParseError, match="invalid JSON"):
        load_json("{")


def test_dumps_is_deterministic():
    assert dumps({"b": Fraction(1, 2), "a": {3, 1}}) == '{\n  "a": [\n    1,\n    3\n  ],\n  "b": "1/2"\n}\n'


def test_dot_output():
    text = graph_to_dot(banana(1, 2))
    assert text.startswith("graph G {") and '"u" -- "w"' in text and "ℓ=2" in text
    text = morphism_to_dot(tate_isogeny())
    assert "ℓ=1/2, d=2" in text


@given(st.integers(0, 10**6))
def test_random_bundle_round_trip(seed):
    phi = random_harmonic_morphism(seed)
    text = dumps(serialize_bundle(phi))
    assert dumps(serialize_bundle(parse_bundle(load_json(text)))) == text
