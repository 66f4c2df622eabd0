"""Divisor theory: principal divisors, reduced divisors, rank.

Metric questions are reduced to chip-firing on a unit-length model: first
subdivide at the support of the divisor, then cut every edge into unit
pieces.  Divisor rank is invariant under this, and the original model
vertices form a rank-determining set, so only they are tried as the points
removed in the rank recursion.
"""
from __future__ import annotations

from collections import deque
from fractions import Fraction
from itertools import combinations

from .errors import ValidationError
from .graph import (INF, Divisor, Edge, MetricGraph, Point, first_betti, subdivide,
                    uniformize)


class ChipGraph:
    """Finite connected multigraph on vertices 0..n-1 for chip-firing."""

    def __init__(self, names, adj):
        self.names = list(names)
        self.index = {v: i for i, v in enumerate(self.names)}
        self.adj = [dict(a) for a in adj]
        self.n = len(self.names)
        self.deg = [sum(a.values()) for a in self.adj]
        self.nedges = sum(self.deg) // 2
        self._dist = {}

    @classmethod
    def from_edges(cls, n, edges, names=None):
        adj = [dict() for _ in range(n)]
        for a, b in edges:
            if a == b:
                raise ValidationError("loop edge in chip graph")
            adj[a][b] = adj[a].get(b, 0) + 1
            adj[b][a] = adj[b].get(a, 0) + 1
        return cls(names or list(range(n)), adj)

    @classmethod
    def from_metric(cls, m: MetricGraph):
        """Finite part of a unit-length model."""
        names = m.finite_vertices
        idx = {v: i for i, v in enumerate(names)}
        edges = []
        for e in m.finite_edges:
            if e.length != 1:
                raise ValidationError(f"edge {e.id!r} does not have unit length")
            edges.append((idx[e.ends[0]], idx[e.ends[1]]))
        return cls.from_edges(len(names), edges, names)

    @property
    def genus(self):
        return self.nedges - self.n + 1

    def laplacian(self):
        L = [[0] * self.n for _ in range(self.n)]
        for i, a in enumerate(self.adj):
            L[i][i] = self.deg[i]
            for j, c in a.items():
                L[i][j] -= c
        return L

    def vector(self, d):
        """Coefficient list from a {name: coeff} mapping or a Divisor."""
        out = [0] * self.n
        for k, c in dict(d).items():
            if isinstance(k, Point):
                if not k.is_vertex:
                    raise ValidationError(f"point {k!r} is not a vertex of the chip graph")
                k = k.vertex
            if k not in self.index:
                raise ValidationError(f"{k!r} is not a vertex of the chip graph")
            out[self.index[k]] += c
        return out

    def divisor(self, vec):
        return Divisor({self.names[i]: c for i, c in enumerate(vec) if c})

    def distances(self, q):
        if q not in self._dist:
            dist = [-1] * self.n
            dist[q] = 0
            dq = deque([q])
            while dq:
                u = dq.popleft()
                for w in self.adj[u]:
                    if dist[w] < 0:
                        dist[w] = dist[u] + 1
                        dq.append(w)
            if min(dist) < 0:
                raise ValidationError("chip graph is not connected")
            self._dist[q] = dist
        return self._dist[q]

    def fire(self, D, S, k, script=None):
        """Fire every vertex of the set S, k times, in place."""
        for u in S:
            for w, c in self.adj[u].items():
                if w not in S:
                    D[u] -= k * c
                    D[w] += k * c
            if script is not None:
                script[u] += k

    def reduce(self, D, q, script=None):
        """q-reduced divisor equivalent to D (Dhar's burning algorithm)."""
        D = list(D)
        dist = self.distances(q)
        top = max(dist)
        # make D nonnegative away from q, farthest layer first
        for L in range(top, 0, -1):
            S = {v for v in range(self.n) if dist[v] <= L - 1}
            k = 0
            for v in range(self.n):
                if dist[v] == L and D[v] < 0:
                    inflow = sum(c for w, c in self.adj[v].items() if w in S)
                    k = max(k, -(D[v] // inflow))
            if k:
                self.fire(D, S, k, script)
        while True:
            burnt = [False] * self.n
            burnt[q] = True
            seen = [0] * self.n
            stack = [q]
            while stack:
                u = stack.pop()
                for w, c in self.adj[u].items():
                    if not burnt[w]:
                        seen[w] += c
                        if seen[w] > D[w]:
                            burnt[w] = True
                            stack.append(w)
            S = {v for v in range(self.n) if not burnt[v]}
            if not S:
                return D
            k = min(D[v] // seen[v] for v in S if seen[v])
            self.fire(D, S, k, script)

    def is_effective_class(self, D, q=0):
        return sum(D) >= 0 and self.reduce(D, q)[q] >= 0

    def rank(self, D, candidates=None, use_riemann_roch=True, q=0, memo=None):
        """Baker-Norine rank; ``candidates`` must be a rank-determining set."""
        cand = list(range(self.n)) if candidates is None else list(candidates)
        g = self.genus
        memo = {} if memo is None else memo

        def rec(D):
            deg = sum(D)
            if deg < 0:
                return -1
            red = self.reduce(D, q)
            if red[q] < 0:
                return -1
            if use_riemann_roch and deg > 2 * g - 2:
                return deg - g
            key = tuple(red)
            if key in memo:
                return memo[key]
            best = deg
            for v in cand:
                red[v] -= 1
                best = min(best, rec(red) + 1)
                red[v] += 1
                if best == 0:
                    break
            memo[key] = best
            return best

        return rec(list(D))

    def canonical(self):
        return [d - 2 for d in self.deg]


# -- metric layer ----------------------------------------------------------

class RationalFunction:
    """Piecewise-affine function given by its values on the vertices of a model.

    ``refinement`` (optional) relates that model to a coarser graph so the
    principal divisor can be reported there.
    """

    def __init__(self, graph: MetricGraph, values, refinement=None):
        self.graph = graph
        self.values = {v: Fraction(x) for v, x in dict(values).items()}
        self.refinement = refinement

    def slope(self, eid, end=0):
        """Outgoing slope along edge eid leaving its ``end``-th endpoint."""
        e = self.graph.edges[eid]
        if e.length == INF:
            return 0
        a, b = e.ends
        s = (self.values[b] - self.values[a]) / e.length
        return s if end == 0 else -s


def principal_divisor(gamma_or_f, f: RationalFunction = None):
    """div(F): at each point, the sum of the outgoing slopes of F."""
    F = gamma_or_f if f is None else f
    m = F.graph
    out = {}
    for v in m.vertices:
        tot = Fraction(0)
        for eid, k in m.incident(v):
            s = F.slope(eid, k)
            if s.denominator != 1:
                raise ValidationError(f"non-integer slope {s} on edge {eid!r}")
            tot += s
        if tot:
            out[Point.at(v)] = int(tot)
    D = Divisor(out)
    if F.refinement is not None:
        D = F.refinement.pull(D)
    return D


def _check_support(m: MetricGraph, D: Divisor):
    for p in D:
        if p.is_vertex and p.vertex in m.infinite:
            raise ValidationError(f"divisor supported at infinite vertex {p.vertex!r}")
        if not p.is_vertex and m.edges[p.edge].length == INF:
            raise ValidationError(f"divisor supported on infinite edge {p.edge!r}")


class UnitModel:
    """A divisor problem transported to a chip graph."""

    def __init__(self, m: MetricGraph, divisors):
        divisors = [Divisor(d) for d in divisors]
        for d in divisors:
            _check_support(m, d)
        base = m.finite_part() if m.infinite else m
        pts = {p for d in divisors for p in d}
        fine, r1 = subdivide(base, pts)
        unit, scale, r2 = uniformize(fine)
        self.base, self.fine, self.unit, self.scale = base, fine, unit, scale
        self.r1, self.r2 = r1, r2
        self.chip = ChipGraph.from_metric(unit)
        self.vectors = [self.chip.vector(r2.push(r1.push(d))) for d in divisors]
        self.model_vertices = [self.chip.index[v] for v in fine.vertices]


def rank_metric(m: MetricGraph, D, use_riemann_roch=True):
    """Rank r(D) of a divisor on a metric graph (exact)."""
    D = Divisor(D)
    if D.degree() < 0:
        _check_support(m, D)
        return -1
    U = UnitModel(m, [D])
    return U.chip.rank(U.vectors[0], U.model_vertices, use_riemann_roch)


def rank_grid_oracle(m: MetricGraph, D, refine=2):
    """Rank on a finer grid using every grid point; independent of the
    rank-determining shortcut and of Riemann-Roch."""
    U = UnitModel(m, [D])
    pts = []
    for e in U.unit.finite_edges:
        pts += [Point.on(e.id, Fraction(k, refine)) for k in range(1, refine)]
    g2, r3 = subdivide(U.unit, pts)
    # rescale so the grid has unit edges
    unit2, _, r4 = uniformize(g2)
    chip = ChipGraph.from_metric(unit2)
    vec = chip.vector(r4.push(r3.push(U.chip.divisor(U.vectors[0]))))
    return chip.rank(vec, None, use_riemann_roch=False)


def virtual_cycle_graph(m: MetricGraph, g=None, cycle_length=2):
    """Attach g(p) cycles (two parallel edges of half the length) at each p."""
    gf = m.genus if g is None else g
    vs = list(m.vertices)
    es = list(m.edges.values())
    half = Fraction(cycle_length) / 2
    for p in m.vertices:
        for i in range(gf.get(p, 0)):
            w = f"{p}~vc{i}"
            vs.append(w)
            es += [Edge(f"{p}~vc{i}a", (p, w), half), Edge(f"{p}~vc{i}b", (p, w), half)]
    return MetricGraph(vs, es, {}, m.infinite)


def weighted_rank(m: MetricGraph, g=None, D=None, cycle_length=2, use_riemann_roch=True):
    """Rank on the graph with virtual cycles attached at positive-genus points."""
    if D is None:
        g, D = None, g
    return rank_metric(virtual_cycle_graph(m, g, cycle_length), D, use_riemann_roch)


def dhar_reduce(m: MetricGraph, D, q=None):
    """q-reduced form of D on a unit model (vertex-supported divisors)."""
    G = ChipGraph.from_metric(m)
    qi = 0 if q is None else G.index[q]
    return G.divisor(G.reduce(G.vector(Divisor(D)), qi))


def is_effective_class(m: MetricGraph, D):
    D = Divisor(D)
    if D.degree() < 0:
        return False
    U = UnitModel(m, [D])
    return U.chip.is_effective_class(U.vectors[0])


def linearly_equivalent(m: MetricGraph, D1, D2):
    D1, D2 = Divisor(D1), Divisor(D2)
    if D1.degree() != D2.degree():
        return False
    U = UnitModel(m, [D1, D2])
    a, b = U.vectors
    return U.chip.reduce(a, 0) == U.chip.reduce(b, 0)


def equivalence_witness(m: MetricGraph, D1, D2):
    """A RationalFunction F with D1 - D2 = div(F), or None."""
    D1, D2 = Divisor(D1), Divisor(D2)
    if D1.degree() != D2.degree():
        return None
    U = UnitModel(m, [D1, D2])
    G = U.chip
    s1, s2 = [0] * G.n, [0] * G.n
    r1 = G.reduce(U.vectors[0], 0, s1)
    r2 = G.reduce(U.vectors[1], 0, s2)
    if r1 != r2:
        return None
    vals = {G.names[i]: Fraction(s2[i] - s1[i]) / U.scale for i in range(G.n)}
    return RationalFunction(_rescaled(U.unit, U.scale), vals, _Chain(U.r1, U.r2))


class _Chain:
    """Two refinements applied in sequence (coarse -> mid -> fine)."""

    def __init__(self, first, second):
        self.first, self.second = first, second

    def pull(self, d):
        return self.first.pull(self.second.pull(d))


def _rescaled(m, scale):
    es = [Edge(e.id, e.ends, e.length if e.length == INF else e.length / scale)
          for e in m.edges.values()]
    return MetricGraph(m.vertices, es, m.genus, m.infinite)


def canonical_vector(G: ChipGraph):
    return G.canonical()


def _tree_check(phi):
    if first_betti(phi.target) != 0:
        raise ValidationError("target is not a tree")
    if any(d == 0 for d in phi.edge_degree.values()):
        raise ValidationError("morphism is not finite")


def sample_fibers(phi):
    """Fibers over every finite target vertex and every finite edge midpoint."""
    from .harmonic import fiber_divisor
    _tree_check(phi)
    T = phi.target
    xs = [Point.at(v) for v in T.finite_vertices]
    xs += [Point.on(e.id, e.length / 2) for e in T.finite_edges]
    return [(x, fiber_divisor(phi, x)) for x in xs]


def fibers_have_rank_one(phi):
    return all(rank_metric(phi.source, D) >= 1 for _, D in sample_fibers(phi))


def fibers_linearly_equivalent(phi):
    fibers = [D for _, D in sample_fibers(phi)]
    return all(linearly_equivalent(phi.source, fibers[0], D) for D in fibers[1:])


def degree_two_rank_one_divisors(m: MetricGraph, g=None, points=None):
    """Search effective degree-2 divisors on the given points with r# = 1."""
    pts = list(points) if points is not None else [Point.at(v) for v in m.finite_vertices]
    out = []
    for a, b in list(combinations(pts, 2)) + [(p, p) for p in pts]:
        D = Divisor({a: 1}) + {b: 1}
        if weighted_rank(m, g, D) >= 1:
            out.append(D)
    return out
