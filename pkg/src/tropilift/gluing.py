"""Counting lifts through a two-term complex of finite abelian groups.

E1 is the product over finite source edges of Z/d_e.  E0 (vertex
automorphisms of the residue covers) is supplied by the caller together with
the map rho: E0 -> E1.  Lift classes form a torsor under coker(rho); each
lift has ker(rho) as automorphism group.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import prod

from .errors import ValidationError
from .harmonic import Morphism
from .linalg import integer_nullspace, smith_normal_form, solve_rational


def _canonical(orders):
    if not orders:
        return []
    s, _, _ = smith_normal_form([[int(o) if i == j else 0 for j in range(len(orders))]
                                 for i, o in enumerate(orders)])
    return [s[i][i] for i in range(len(orders)) if s[i][i] != 1]


class FiniteAbelianGroup:
    """Z/n_1 x ... x Z/n_k presented by cyclic generators.

    ``orders`` is the presentation used by homomorphisms; ``factors`` is the
    canonical invariant-factor form (trivial factors dropped).
    """

    def __init__(self, orders):
        self.orders = [int(o) for o in orders]
        if any(o < 1 for o in self.orders):
            raise ValidationError("cyclic orders must be positive")
        self.factors = _canonical(self.orders)

    @property
    def order(self):
        return prod(self.orders)

    def elements(self):
        return list(product(*(range(o) for o in self.orders)))

    def __eq__(self, other):
        return isinstance(other, FiniteAbelianGroup) and self.factors == other.factors

    def __repr__(self):
        return "trivial group" if not self.factors else " x ".join(f"Z/{n}" for n in self.factors)


class GroupHom:
    """Matrix with one column per domain generator, read modulo codomain orders."""

    def __init__(self, domain: FiniteAbelianGroup, codomain: FiniteAbelianGroup, matrix):
        self.domain = domain
        self.codomain = codomain
        m, n = len(codomain.orders), len(domain.orders)
        matrix = [list(map(int, r)) for r in matrix] if matrix else [[] for _ in range(m)]
        if len(matrix) != m or any(len(r) != n for r in matrix):
            raise ValidationError(f"matrix must be {m}x{n}")
        self.matrix = [[x % c for x in row] for row, c in zip(matrix, codomain.orders)]
        for j, a in enumerate(domain.orders):
            for i, c in enumerate(codomain.orders):
                if (a * self.matrix[i][j]) % c:
                    raise ValidationError(
                        f"ill-defined: generator {j} has order {a} but its image "
                        f"coordinate {i} is not killed by {a} in Z/{c}")

    def __call__(self, x):
        return tuple(sum(r[j] * x[j] for j in range(len(x))) % c
                     for r, c in zip(self.matrix, self.codomain.orders))


def _cokernel(rho: GroupHom):
    m = len(rho.codomain.orders)
    big = [rho.matrix[i] + [rho.codomain.orders[k] if k == i else 0 for k in range(m)]
           for i in range(m)]
    if m == 0:
        return []
    s, _, _ = smith_normal_form(big)
    diag = [s[i][i] for i in range(m)]
    if 0 in diag:
        raise ValidationError("cokernel is infinite")
    return [x for x in diag if x != 1]


def _int_inverse(V):
    n = len(V)
    cols = [solve_rational(V, [int(i == j) for i in range(n)]) for j in range(n)]
    return [[int(cols[j][i]) for j in range(n)] for i in range(n)]


def _kernel(rho: GroupHom):
    a = rho.domain.orders
    c = rho.codomain.orders
    n, m = len(a), len(c)
    if n == 0:
        return []
    # x in Z^n with M x in C Z^m  <=>  (x, y) in nullspace of [M | -C]
    A = [rho.matrix[i] + [-c[i] if k == i else 0 for k in range(m)] for i in range(m)]
    gens = [r[:n] for r in integer_nullspace(A, n + m)] if m else [
        [int(i == j) for j in range(n)] for i in range(n)]
    s, _, v = smith_normal_form(gens)
    vinv = _int_inverse(v)
    basis = [[s[i][i] * x for x in vinv[i]] for i in range(min(len(s), n)) if s[i][i]]
    if len(basis) != n:
        raise ValidationError("kernel lattice is not of full rank")
    B = [[basis[j][i] for j in range(n)] for i in range(n)]   # columns = basis vectors
    Q = []
    for j in range(n):
        col = solve_rational(B, [a[j] if i == j else 0 for i in range(n)])
        if any(Fraction(x).denominator != 1 for x in col):
            raise ValidationError("ill-defined homomorphism")
        Q.append([int(x) for x in col])
    Q = [[Q[j][i] for j in range(n)] for i in range(n)]
    s, _, _ = smith_normal_form(Q)
    return [s[i][i] for i in range(n) if s[i][i] != 1]


@dataclass
class Cohomology:
    h0_order: int
    h0_factors: list
    h1_order: int
    h1_factors: list


def complex_cohomology(rho: GroupHom) -> Cohomology:
    k = _kernel(rho)
    c = _cokernel(rho)
    return Cohomology(prod(k), k, prod(c), c)


def kernel_cokernel_bruteforce(rho: GroupHom):
    """Orders of ker and coker by listing elements (small groups only)."""
    image = {rho(x) for x in rho.domain.elements()}
    ker = sum(1 for x in rho.domain.elements() if not any(rho(x)))
    return ker, rho.codomain.order // len(image)


def e1_from_morphism(phi: Morphism) -> FiniteAbelianGroup:
    return FiniteAbelianGroup([phi.edge_degree[e.id] for e in phi.source.finite_edges])


def rho_from_vertex_actions(phi: Morphism, vertex_orders, restriction):
    """Build (E0, rho) from per-vertex cyclic groups.

    ``restriction[v][e]`` is the image of the generator at v in Aut(e) ~ Z/d_e.
    It enters with + at ends[0] of e and with - at ends[1].
    """
    verts = list(vertex_orders)
    E0 = FiniteAbelianGroup([vertex_orders[v] for v in verts])
    E1 = e1_from_morphism(phi)
    rows = []
    for e in phi.source.finite_edges:
        row = []
        for v in verts:
            k = restriction.get(v, {}).get(e.id, 0)
            sign = 1 if v == e.ends[0] else (-1 if v == e.ends[1] else 0)
            row.append(sign * k)
        rows.append(row)
    return E0, GroupHom(E0, E1, rows)


@dataclass
class LiftCount:
    gluing_data: int
    classes: int
    automorphisms: int
    image_order: int
    h0_factors: list
    h1_factors: list

    def as_dict(self):
        return dict(self.__dict__)


def count_lifts(phi: Morphism, e0: FiniteAbelianGroup, rho: GroupHom) -> LiftCount:
    E1 = e1_from_morphism(phi)
    if rho.codomain != E1 or rho.domain != e0:
        raise ValidationError(
            f"E1 mismatch: rho maps {rho.domain!r} -> {rho.codomain!r}, morphism needs "
            f"{e0!r} -> {E1!r}")
    coh = complex_cohomology(rho)
    image = e0.order // coh.h0_order
    if image * coh.h1_order != E1.order:
        raise AssertionError("index identity failed")
    return LiftCount(E1.order, coh.h1_order, coh.h0_order, image, coh.h0_factors,
                     coh.h1_factors)


def tate_gluing_data(phi=None):
    """The +-1 vertex automorphisms acting on both degree-2 edges of the Tate map."""
    from .fixtures import tate_isogeny
    phi = phi or tate_isogeny()
    vs = [v for v in phi.source.vertices]
    E0, rho = rho_from_vertex_actions(
        phi, {v: 2 for v in vs}, {v: {e.id: 1 for e in phi.source.finite_edges} for v in vs})
    return phi, E0, rho
