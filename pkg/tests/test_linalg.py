from fractions import Fraction
from itertools import permutations
from math import prod

from hypothesis import given
from hypothesis import strategies as st

from tropilift.linalg import (det_bareiss, integer_nullspace, matmul, smith_normal_form,
                              solve_rational)


def matrices(max_rows=4, max_cols=4, lo=-6, hi=6):
    return st.integers(1, max_rows).flatmap(lambda m: st.integers(1, max_cols).flatmap(
        lambda n: st.lists(st.lists(st.integers(lo, hi), min_size=n, max_size=n),
                           min_size=m, max_size=m)))


def _det_leibniz(a):
    n = len(a)
    total = 0
    for p in permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if p[i] > p[j])
        total += (-1) ** inv * prod(a[i][p[i]] for i in range(n))
    return total


@given(matrices())
def test_snf_is_a_unimodular_diagonalization(a):
    s, u, v = smith_normal_form(a)
    assert matmul(matmul(u, a), v) == s
    m, n = len(a), len(a[0])
    diag = [s[i][i] for i in range(min(m, n))]
    for i in range(m):
        for j in range(n):
            if i != j:
                assert s[i][j] == 0
    assert all(x >= 0 for x in diag)
    for x, y in zip(diag, diag[1:]):
        assert (y == 0) if x == 0 else y % x == 0
    assert abs(det_bareiss(u)) == 1 and abs(det_bareiss(v)) == 1


@given(st.integers(1, 4).flatmap(lambda n: st.lists(
    st.lists(st.integers(-5, 5), min_size=n, max_size=n), min_size=n, max_size=n)))
def test_bareiss_matches_leibniz(a):
    assert det_bareiss(a) == _det_leibniz(a)


@given(matrices(3, 5))
def test_nullspace_vectors_are_in_the_kernel(a):
    n = len(a[0])
    basis = integer_nullspace(a, n)
    for x in basis:
        assert all(sum(r[j] * x[j] for j in range(n)) == 0 for r in a)
    # rank + nullity
    s, _, _ = smith_normal_form(a)
    rank = sum(1 for i in range(min(len(a), n)) if s[i][i])
    assert len(basis) == n - rank


def test_solve_rational_small():
    x = solve_rational([[2, 1], [1, 3]], [1, 2])
    assert x == [Fraction(1, 5), Fraction(3, 5)]
