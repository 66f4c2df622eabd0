import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from tropilift.errors import ValidationError
from tropilift.fixtures import star_map, tate_isogeny
from tropilift.gluing import (FiniteAbelianGroup, GroupHom, complex_cohomology, count_lifts,
                              e1_from_morphism, kernel_cokernel_bruteforce,
                              rho_from_vertex_actions, tate_gluing_data)


def test_tate_counts():
    phi, E0, rho = tate_gluing_data()
    res = count_lifts(phi, E0, rho)
    assert res.gluing_data == 4
    assert res.classes == 2
    assert res.automorphisms == 2
    assert res.image_order * res.classes == res.gluing_data
    assert kernel_cokernel_bruteforce(rho) == (2, 2)


def test_tate_with_larger_circumference():
    phi, E0, rho = tate_gluing_data(tate_isogeny(4))
    assert count_lifts(phi, E0, rho).classes == 2


def test_group_normal_form():
    assert FiniteAbelianGroup([2, 3]) == FiniteAbelianGroup([6])
    assert FiniteAbelianGroup([2, 2]) != FiniteAbelianGroup([4])
    assert FiniteAbelianGroup([1, 1]).factors == []
    assert repr(FiniteAbelianGroup([])) == "trivial group"
    with pytest.raises(ValidationError):
        FiniteAbelianGroup([0])


def test_ill_defined_hom():
    with pytest.raises(ValidationError, match="ill-defined"):
        GroupHom(FiniteAbelianGroup([2]), FiniteAbelianGroup([3]), [[1]])
    GroupHom(FiniteAbelianGroup([2]), FiniteAbelianGroup([4]), [[2]])


def test_e1_mismatch():
    phi, E0, rho = tate_gluing_data()
    with pytest.raises(ValidationError, match="E1 mismatch"):
        count_lifts(star_map(), E0, rho)


def test_e1_for_star_map_ignores_infinite_edges():
    assert e1_from_morphism(star_map()).order == 1
    assert e1_from_morphism(tate_isogeny()) == FiniteAbelianGroup([2, 2])


def test_rho_from_actions_signs():
    phi = tate_isogeny()
    E0, rho = rho_from_vertex_actions(phi, {"y'": 2}, {"y'": {"e1": 1}})
    assert rho.matrix == [[1], [0]]
    _, rho = rho_from_vertex_actions(phi, {"z'": 2}, {"z'": {"e1": 1, "e2": 1}})
    # z' is the second end of e1 and the first end of e2
    assert rho.matrix == [[1], [1]]


def _random_hom(seed):
    rng = random.Random(seed)
    a = [rng.randint(1, 6) for _ in range(rng.randint(0, 3))]
    c = [rng.randint(1, 6) for _ in range(rng.randint(0, 3))]
    rows = []
    for ci in c:
        row = []
        for ai in a:
            # admissible coefficients k: a*k = 0 mod c
            ok = [k for k in range(ci) if (ai * k) % ci == 0]
            row.append(rng.choice(ok))
        rows.append(row)
    return GroupHom(FiniteAbelianGroup(a), FiniteAbelianGroup(c), rows)


@given(st.integers(0, 10**6))
def test_cohomology_matches_bruteforce(seed):
    rho = _random_hom(seed)
    coh = complex_cohomology(rho)
    ker, coker = kernel_cokernel_bruteforce(rho)
    assert coh.h0_order == ker
    assert coh.h1_order == coker
    assert rho.domain.order // ker * coker == rho.codomain.order
