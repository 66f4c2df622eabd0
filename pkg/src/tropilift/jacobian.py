"""Jacobians of Z-metric graphs and the maps induced by harmonic morphisms.

The Jacobian is computed on the unit-length model as Pic^0 of a finite
graph.  Classes are stored as q-reduced coefficient tuples, so equality of
classes is equality of tuples.
"""
from __future__ import annotations

from collections import deque
from fractions import Fraction
from math import lcm, prod

from .divisors import ChipGraph
from .errors import ValidationError
from .graph import Divisor, MetricGraph, Point, uniformize
from .harmonic import Morphism, degree, pullback_point
from .linalg import det_bareiss, smith_normal_form, solve_rational


class CriticalGroup:
    """Pic^0 of the unit model of a metric graph with integer edge lengths."""

    def __init__(self, m: MetricGraph, basepoint=None):
        if m.infinite:
            raise ValidationError("Jacobian needs a graph without infinite vertices")
        for e in m.finite_edges:
            if e.length.denominator != 1:
                raise ValidationError(
                    f"edge {e.id!r} has non-integer length {e.length}; rescale first")
        self.graph = m
        self.unit, _, self.refinement = uniformize(m)
        self.chip = ChipGraph.from_metric(self.unit)
        self.q = 0 if basepoint is None else self.chip.index[basepoint]
        L = self.chip.laplacian()
        keep = [i for i in range(self.chip.n) if i != self.q]
        self._Lq = [[L[i][j] for j in keep] for i in keep]
        self._keep = keep
        if keep:
            s, _, _ = smith_normal_form(self._Lq)
            diag = [s[i][i] for i in range(len(keep))]
        else:
            diag = []
        self.factors = [x for x in diag if x != 1]
        self.order = prod(self.factors)
        self.spanning_trees = det_bareiss(self._Lq) if keep else 1
        if self.order != self.spanning_trees:
            raise AssertionError(
                f"Smith form order {self.order} != spanning tree count {self.spanning_trees}")
        self._elements = None

    # -- classes ---------------------------------------------------------
    @property
    def zero(self):
        return tuple([0] * self.chip.n)

    def reduce(self, vec):
        if sum(vec) != 0:
            raise ValidationError("Jacobian classes need degree-0 divisors")
        return tuple(self.chip.reduce(list(vec), self.q))

    def class_of(self, D):
        """Class of a degree-0 divisor given on the original graph or its unit model."""
        D = Divisor(D)
        pts = {}
        for p, c in D.items():
            if p.is_vertex and p.vertex in self.chip.index:
                key = p.vertex
            else:
                fp = self.refinement.forward(self.graph.canonical_point(p))
                if not fp.is_vertex:
                    raise ValidationError(f"{p!r} is not a vertex of the unit model")
                key = fp.vertex
            pts[key] = pts.get(key, 0) + c
        return self.reduce(self.chip.vector(pts))

    def add(self, a, b):
        return self.reduce([x + y for x, y in zip(a, b)])

    def neg(self, a):
        return self.reduce([-x for x in a])

    def scale(self, a, n):
        return self.reduce([n * x for x in a])

    def generators(self):
        """Classes of (v) - (q)."""
        out = []
        for v in range(self.chip.n):
            if v != self.q:
                vec = [0] * self.chip.n
                vec[v] += 1
                vec[self.q] -= 1
                out.append(self.reduce(vec))
        return out

    def elements(self):
        if self._elements is None:
            gens = self.generators()
            seen = {self.zero}
            dq = deque([self.zero])
            while dq:
                a = dq.popleft()
                for g in gens:
                    b = self.add(a, g)
                    if b not in seen:
                        seen.add(b)
                        dq.append(b)
            if len(seen) != self.order:
                raise AssertionError(f"enumerated {len(seen)} classes, expected {self.order}")
            self._elements = sorted(seen)
        return self._elements

    def pairing(self, a, b):
        """Monodromy pairing <a, b> in Q/Z, returned as a Fraction in [0, 1)."""
        if not self._keep:
            return Fraction(0)
        rhs = [b[i] for i in self._keep]
        x = solve_rational(self._Lq, rhs)
        val = sum(Fraction(a[i]) * xi for i, xi in zip(self._keep, x))
        return val - (val.numerator // val.denominator)

    def __repr__(self):
        return f"CriticalGroup(order={self.order}, factors={self.factors})"


def regularized_jacobian(m: MetricGraph) -> CriticalGroup:
    return CriticalGroup(m)


def spanning_tree_count(m: MetricGraph):
    """Matrix-tree count on the unit model (independent of the Smith form)."""
    unit, _, _ = uniformize(m)
    G = ChipGraph.from_metric(unit)
    L = G.laplacian()
    return det_bareiss([row[1:] for row in L[1:]]) if G.n > 1 else 1


class JacobianMap:
    """Push-forward and pull-back between Jacobians along a harmonic morphism."""

    def __init__(self, phi: Morphism):
        self.phi = phi
        self.deg = degree(phi)
        if any(d == 0 for d in phi.edge_degree.values()):
            raise ValidationError("Jacobian maps need a finite morphism")
        self.src = CriticalGroup(phi.source)
        self.tgt = CriticalGroup(phi.target)
        S, T = self.src, self.tgt
        # unit vertex -> unit vertex
        self.vmap = []
        for name in S.chip.names:
            p = S.refinement.back(Point.at(name))
            x = T.refinement.forward(phi.image_point(p))
            if not x.is_vertex:
                raise ValidationError("incompatible models: a unit vertex maps inside an edge")
            self.vmap.append(T.chip.index[x.vertex])
        # refined source for pull-backs
        N = lcm(*phi.edge_degree.values()) if phi.edge_degree else 1
        extra = [Point.on(e.id, Fraction(1, N)) for e in phi.source.finite_edges] if N > 1 else []
        fine, _, self._fine_ref = uniformize(phi.source, extra)
        self._fine = ChipGraph.from_metric(fine)
        self._fine_q = self._fine.index[S.chip.names[S.q]]
        self._table = {}
        for c in S.elements():
            self._table[self._fine_key(self._coarse_to_fine(c))] = c

    def _coarse_to_fine(self, vec):
        out = [0] * self._fine.n
        for i, c in enumerate(vec):
            if c:
                p = self.src.refinement.back(Point.at(self.src.chip.names[i]))
                v = self._fine_ref.forward(p).vertex
                out[self._fine.index[v]] += c
        return out

    def _fine_key(self, vec):
        return tuple(self._fine.reduce(vec, self._fine_q))

    def pushforward(self, c):
        out = [0] * self.tgt.chip.n
        for i, x in enumerate(c):
            out[self.vmap[i]] += x
        return self.tgt.reduce(out)

    def pullback(self, c):
        T = self.tgt
        out = [0] * self._fine.n
        for i, x in enumerate(c):
            if not x:
                continue
            pt = T.refinement.back(Point.at(T.chip.names[i]))
            for p, d in pullback_point(self.phi, pt).items():
                v = self._fine_ref.forward(p).vertex
                out[self._fine.index[v]] += x * d
        key = self._fine_key(out)
        if key not in self._table:
            raise ValidationError("pull-back class is not supported on the unit model")
        return self._table[key]

    def image(self):
        return {self.pushforward(c) for c in self.src.elements()}

    def kernel_pullback(self):
        return [c for c in self.tgt.elements() if self.pullback(c) == self.src.zero]

    def is_surjective_pushforward(self):
        if self.src.order < self.tgt.order:
            return False
        return len(self.image()) == self.tgt.order

    def coker_pushforward_order(self):
        return self.tgt.order // len(self.image())

    def adjointness_check(self):
        S, T = self.src, self.tgt
        for a in T.elements():
            pa = self.pullback(a)
            for b in S.elements():
                if S.pairing(pa, b) != T.pairing(a, self.pushforward(b)):
                    return False
        return True


def pushforward_jac(phi, c):
    return JacobianMap(phi).pushforward(c)


def pullback_jac(phi, c):
    return JacobianMap(phi).pullback(c)


def is_surjective_pushforward(phi):
    return JacobianMap(phi).is_surjective_pushforward()


def monodromy_pairing(G: CriticalGroup, a, b):
    return G.pairing(a, b)


def adjointness_check(phi):
    return JacobianMap(phi).adjointness_check()
