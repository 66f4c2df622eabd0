"""Augmented metric graphs with explicit models, points and divisors.

Lengths are exact Fractions; ``INF`` marks the unique edge at an infinite
vertex.  Edges at an infinite vertex are stored finite endpoint first so
offsets along them are always finite distances from that endpoint.
"""
from __future__ import annotations

import math
from collections.abc import Mapping
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .errors import ValidationError

INF = math.inf


def as_length(x):
    """Coerce ``x`` (int, Fraction, "p/q", "inf") to a Fraction or INF."""
    if isinstance(x, str):
        s = x.strip().lower()
        if s in ("inf", "infinity", "+inf"):
            return INF
        if "/" in s:
            p, q = s.split("/", 1)
            if int(q) == 0:
                raise ValueError(f"zero denominator in {x!r}")
            return Fraction(int(p), int(q))
        return Fraction(s)
    if isinstance(x, float):
        if math.isinf(x) and x > 0:
            return INF
        raise TypeError("floats are not accepted as lengths; use Fraction or 'p/q'")
    return Fraction(x)


def fmt_q(x):
    """Canonical string for a length or offset."""
    if x == INF:
        return "inf"
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class Edge:
    id: str
    ends: tuple
    length: object

    def other(self, v):
        a, b = self.ends
        return b if v == a else a


@dataclass(frozen=True)
class Point:
    """A vertex, or a point at ``offset`` from ``ends[0]`` along an edge."""
    vertex: str | None = None
    edge: str | None = None
    offset: Fraction | None = None

    @classmethod
    def at(cls, v):
        return cls(vertex=v)

    @classmethod
    def on(cls, e, t):
        return cls(edge=e, offset=Fraction(t))

    @property
    def is_vertex(self):
        return self.vertex is not None

    def key(self):
        if self.vertex is not None:
            return (0, str(self.vertex), 0)
        return (1, str(self.edge), self.offset)

    def __repr__(self):
        if self.vertex is not None:
            return f"({self.vertex})"
        return f"({self.edge}+{fmt_q(self.offset)})"


def _pt(x):
    return x if isinstance(x, Point) else Point.at(x)


class Divisor(Mapping):
    """Finite Z-combination of points; zero coefficients are dropped.

    Plain vertex ids are accepted as keys and promoted to vertex Points.
    """

    __slots__ = ("_d", "_h")

    def __init__(self, data=None):
        d = {}
        for k, c in (dict(data) if data else {}).items():
            k = _pt(k)
            d[k] = d.get(k, 0) + int(c)
        self._d = {k: c for k, c in sorted(d.items(), key=lambda kv: kv[0].key()) if c}
        self._h = None

    def __getitem__(self, k):
        return self._d.get(_pt(k), 0)

    def __iter__(self):
        return iter(self._d)

    def __len__(self):
        return len(self._d)

    def __contains__(self, k):
        return _pt(k) in self._d

    def __eq__(self, other):
        if isinstance(other, Divisor):
            return self._d == other._d
        if isinstance(other, Mapping):
            return self == Divisor(other)
        return NotImplemented

    def __hash__(self):
        if self._h is None:
            self._h = hash(frozenset(self._d.items()))
        return self._h

    def __add__(self, other):
        d = dict(self._d)
        for k, c in Divisor(other).items():
            d[k] = d.get(k, 0) + c
        return Divisor(d)

    def __neg__(self):
        return Divisor({k: -c for k, c in self._d.items()})

    def __sub__(self, other):
        return self + (-Divisor(other))

    def __mul__(self, n):
        return Divisor({k: n * c for k, c in self._d.items()})

    __rmul__ = __mul__

    def degree(self):
        return sum(self._d.values())

    def is_effective(self):
        return all(c > 0 for c in self._d.values())

    def support(self):
        return list(self._d)

    def on_vertices(self):
        """Return {vertex: coeff}; raises if some point is not a vertex."""
        out = {}
        for k, c in self._d.items():
            if not k.is_vertex:
                raise ValidationError(f"divisor has non-vertex support {k!r}")
            out[k.vertex] = c
        return out

    def __repr__(self):
        if not self._d:
            return "Divisor(0)"
        return " + ".join(f"{c}{k!r}" for k, c in self._d.items())


class MetricGraph:
    """An augmented metric graph together with a chosen model.

    The raw constructor does not validate; use :meth:`build` for that.
    """

    def __init__(self, vertices, edges, genus=None, infinite=()):
        self.vertices = tuple(vertices)
        self.edges = {e.id: e for e in edges}
        genus = genus or {}
        self.genus = {v: int(genus.get(v, 0)) for v in self.vertices}
        self.infinite = frozenset(infinite)
        self._inc = {v: [] for v in self.vertices}
        for e in self.edges.values():
            for k, x in enumerate(e.ends):
                if x in self._inc:
                    self._inc[x].append((e.id, k))

    @classmethod
    def build(cls, vertices, edges, genus=None, infinite=()):
        """Validated constructor.

        ``edges`` holds Edge objects or ``(id, u, v, length)`` tuples.  Loops
        are split at their midpoint and infinite edges are reoriented.
        """
        vertices = list(vertices)
        infinite = set(infinite)
        out = []
        for e in edges:
            if not isinstance(e, Edge):
                eid, a, b, ln = e
                e = Edge(str(eid), (a, b), as_length(ln))
            a, b = e.ends
            if a == b:
                mid = f"{e.id}@mid"
                vertices.append(mid)
                half = e.length / 2
                out.append(Edge(f"{e.id}a", (a, mid), half))
                out.append(Edge(f"{e.id}b", (mid, a), half))
                continue
            if a in infinite and b not in infinite:
                e = Edge(e.id, (b, a), e.length)
            out.append(e)
        m = cls(vertices, out, genus, infinite)
        diag = validate_model(m)
        if diag:
            raise ValidationError("; ".join(diag), diag)
        return m

    # -- incidence -----------------------------------------------------
    def incident(self, v):
        """Edge-ends at ``v`` as (edge id, end index); these are the tangent directions."""
        return self._inc[v]

    def valence(self, v):
        return len(self._inc[v])

    def neighbors(self, v):
        return [self.edges[e].ends[1 - k] for e, k in self._inc[v]]

    def is_finite_edge(self, eid):
        return self.edges[eid].length != INF

    @property
    def finite_vertices(self):
        return [v for v in self.vertices if v not in self.infinite]

    @property
    def finite_edges(self):
        return [e for e in self.edges.values() if e.length != INF]

    def point(self, v=None, edge=None, offset=None):
        """Canonical Point: endpoint offsets collapse to the vertex."""
        if v is not None:
            if v not in self._inc:
                raise ValidationError(f"unknown vertex {v!r}")
            return Point.at(v)
        if edge not in self.edges:
            raise ValidationError(f"unknown edge {edge!r}")
        e = self.edges[edge]
        t = Fraction(offset)
        if t == 0:
            return Point.at(e.ends[0])
        if t == e.length:
            return Point.at(e.ends[1])
        if t < 0 or t > e.length:
            raise ValidationError(f"offset {fmt_q(t)} outside edge {edge!r}")
        return Point.on(edge, t)

    def canonical_point(self, p):
        p = _pt(p)
        return self.point(p.vertex) if p.is_vertex else self.point(edge=p.edge, offset=p.offset)

    def with_genus(self, genus):
        return MetricGraph(self.vertices, self.edges.values(), genus, self.infinite)

    def relabel(self, prefix):
        """Copy with every vertex and edge id prefixed (for disjoint unions)."""
        vs = [prefix + v for v in self.vertices]
        es = [Edge(prefix + e.id, tuple(prefix + x for x in e.ends), e.length)
              for e in self.edges.values()]
        return MetricGraph(vs, es, {prefix + v: g for v, g in self.genus.items()},
                           {prefix + v for v in self.infinite})

    def finite_part(self):
        keep = [v for v in self.vertices if v not in self.infinite]
        return MetricGraph(keep, self.finite_edges, self.genus)

    def total_length(self):
        return sum((e.length for e in self.finite_edges), Fraction(0))

    def __repr__(self):
        return f"MetricGraph(|V|={len(self.vertices)}, |E|={len(self.edges)})"

    def __eq__(self, other):
        return (isinstance(other, MetricGraph) and self.vertices == other.vertices
                and self.edges == other.edges and self.genus == other.genus
                and self.infinite == other.infinite)

    def __hash__(self):
        return hash((self.vertices, tuple(self.edges.values())))


def _connected(vertices, edges):
    vertices = list(vertices)
    if not vertices:
        return True
    adj = {v: [] for v in vertices}
    for e in edges:
        a, b = e.ends
        if a in adj and b in adj:
            adj[a].append(b)
            adj[b].append(a)
    seen = {vertices[0]}
    stack = [vertices[0]]
    while stack:
        for w in adj[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(vertices)


def validate_model(m: MetricGraph):
    """List every invariant violation; empty list means the model is valid."""
    diag = []
    vs = set(m.vertices)
    if len(vs) != len(m.vertices):
        diag.append("duplicate vertex id")
    if not m.vertices:
        diag.append("empty vertex set")
    for v in m.infinite:
        if v not in vs:
            diag.append(f"infinite vertex {v!r} is not a vertex")
    for v, g in m.genus.items():
        if g < 0:
            diag.append(f"vertex {v!r}: negative genus")
        if g and v in m.infinite:
            diag.append(f"vertex {v!r}: infinite vertex must have genus 0")
    for e in m.edges.values():
        a, b = e.ends
        if a not in vs or b not in vs:
            diag.append(f"edge {e.id!r}: unknown endpoint")
            continue
        if a == b:
            diag.append(f"edge {e.id!r}: loop edge")
        touches_inf = a in m.infinite or b in m.infinite
        if e.length == INF:
            if not touches_inf:
                diag.append(f"edge {e.id!r}: infinite length between finite vertices")
            elif a in m.infinite:
                diag.append(f"edge {e.id!r}: infinite edge must list its finite end first")
        else:
            if not isinstance(e.length, Fraction) and not isinstance(e.length, int):
                diag.append(f"edge {e.id!r}: length is not an exact rational")
            elif e.length <= 0:
                diag.append(f"edge {e.id!r}: nonpositive length")
            if touches_inf:
                diag.append(f"edge {e.id!r}: edge at an infinite vertex must have length inf")
    for v in m.infinite:
        if v in vs and m.valence(v) != 1:
            diag.append(f"vertex {v!r}: infinite vertex has valence {m.valence(v)}")
    if not _connected(m.vertices, [e for e in m.edges.values() if set(e.ends) <= vs]):
        diag.append("graph is not connected")
    return diag


def first_betti(m: MetricGraph):
    return len(m.finite_edges) - len(m.finite_vertices) + 1


def genus(m: MetricGraph, g=None):
    gf = m.genus if g is None else g
    return first_betti(m) + sum(gf.get(v, 0) for v in m.vertices)


def canonical_divisor(m: MetricGraph, g=None):
    gf = m.genus if g is None else g
    return Divisor({v: m.valence(v) + 2 * gf.get(v, 0) - 2 for v in m.vertices})


class Refinement:
    """Record of a subdivision (and optional rescaling) ``coarse -> fine``."""

    def __init__(self, coarse, fine, pieces, new_vertices, scale=Fraction(1)):
        self.coarse = coarse
        self.fine = fine
        self.pieces = pieces            # fine edge -> (coarse edge, start offset)
        self.new_vertices = new_vertices  # fine vertex -> (coarse edge, offset)
        self.scale = Fraction(scale)
        self._cuts = {}
        for v, (e, t) in new_vertices.items():
            self._cuts.setdefault(e, []).append((t, v))
        self._by_edge = {}
        for fe, (e, t) in pieces.items():
            self._by_edge.setdefault(e, []).append((t, fe))
        for lst in self._by_edge.values():
            lst.sort()

    def forward(self, p):
        """Coarse point -> fine point."""
        p = self.coarse.canonical_point(p)
        if p.is_vertex:
            return p
        for t, v in self._cuts.get(p.edge, ()):
            if t == p.offset:
                return Point.at(v)
        starts = self._by_edge[p.edge]
        t0, fe = max((s for s in starts if s[0] < p.offset), key=lambda s: s[0])
        return Point.on(fe, (p.offset - t0) * self.scale)

    def back(self, p):
        """Fine point -> coarse point."""
        p = _pt(p)
        if p.is_vertex:
            if p.vertex in self.new_vertices:
                e, t = self.new_vertices[p.vertex]
                return Point.on(e, t)
            return p
        e, t0 = self.pieces[p.edge]
        return self.coarse.point(edge=e, offset=t0 + p.offset / self.scale)

    def push(self, d: Divisor):
        return Divisor({self.forward(k): c for k, c in d.items()}) if d else Divisor()

    def pull(self, d: Divisor):
        out = Divisor()
        for k, c in d.items():
            out = out + {self.back(k): c}
        return out


def _refine(m: MetricGraph, cuts, scale=Fraction(1)):
    taken = set(m.vertices)
    new_vertices, pieces = {}, {}
    vs = list(m.vertices)
    es = []
    for e in m.edges.values():
        ts = sorted(set(cuts.get(e.id, ())))
        if not ts:
            ln = e.length if e.length == INF else e.length * scale
            es.append(Edge(e.id, e.ends, ln))
            pieces[e.id] = (e.id, Fraction(0))
            continue
        names = []
        for t in ts:
            name = f"{e.id}@{fmt_q(t)}"
            while name in taken:
                name += "'"
            taken.add(name)
            names.append(name)
            new_vertices[name] = (e.id, t)
        vs.extend(names)
        chain = [e.ends[0]] + names + [e.ends[1]]
        bounds = [Fraction(0)] + ts + [e.length]
        for i in range(len(chain) - 1):
            fid = f"{e.id}.{i}"
            ln = bounds[i + 1] - bounds[i] if bounds[i + 1] != INF else INF
            if ln != INF:
                ln = ln * scale
            es.append(Edge(fid, (chain[i], chain[i + 1]), ln))
            pieces[fid] = (e.id, bounds[i])
    fine = MetricGraph(vs, es, m.genus, m.infinite)
    return Refinement(m, fine, pieces, new_vertices, scale)


def subdivide(m: MetricGraph, points: Iterable = ()):
    """Promote ``points`` to vertices. Returns (fine model, Refinement)."""
    cuts = {}
    for p in points:
        p = m.canonical_point(p)
        if not p.is_vertex:
            cuts.setdefault(p.edge, set()).add(p.offset)
    r = _refine(m, cuts)
    return r.fine, r


def uniformize(m: MetricGraph, extra_points: Iterable = ()):
    """Rescale to integer lengths and cut every finite edge into unit edges.

    Returns (unit model, scale, Refinement).  ``extra_points`` are edge points
    whose offsets must also become integral (they end up as vertices).
    """
    dens = [e.length.denominator for e in m.finite_edges]
    for p in extra_points:
        p = m.canonical_point(p)
        if not p.is_vertex:
            dens.append(p.offset.denominator)
    scale = 1
    for d in dens:
        scale = scale * d // math.gcd(scale, d)
    cuts = {}
    for e in m.edges.values():
        if e.length == INF:
            continue
        n = int(e.length * scale)
        if n > 1:
            cuts[e.id] = [Fraction(k, scale) for k in range(1, n)]
    r = _refine(m, cuts, Fraction(scale))
    return r.fine, Fraction(scale), r


class Retraction:
    """The retraction of an elementary modification back onto the original graph."""

    def __init__(self, fine, refinement: Refinement, base: Point, new_vertex, new_edge):
        self.fine = fine
        self.refinement = refinement
        self.base = base
        self.new_vertex = new_vertex
        self.new_edge = new_edge

    def __call__(self, p):
        p = _pt(p)
        if p.vertex == self.new_vertex or p.edge == self.new_edge:
            return self.base
        return self.refinement.back(p)

    def forward(self, p):
        return self.refinement.forward(p)


def elementary_modification(m: MetricGraph, p, new_length=INF):
    """Attach a new leaf edge at ``p``; returns (modified graph, Retraction)."""
    p = m.canonical_point(p)
    if p.is_vertex and p.vertex in m.infinite:
        raise ValidationError("point not Λ-rational (infinite vertex)")
    fine, r = subdivide(m, [p])
    anchor = r.forward(p).vertex
    new_length = new_length if new_length == INF else as_length(new_length)
    k = 0
    while f"mod{k}" in fine.edges or f"mod{k}" in fine._inc:
        k += 1
    nv, ne = f"mod{k}", f"mod{k}"
    inf = set(fine.infinite)
    if new_length == INF:
        inf.add(nv)
    elif new_length <= 0:
        raise ValidationError("modification length must be positive")
    out = MetricGraph(list(fine.vertices) + [nv],
                      list(fine.edges.values()) + [Edge(ne, (anchor, nv), new_length)],
                      fine.genus, inf)
    return out, Retraction(out, r, p, nv, ne)


def retract_divisor(tau: Retraction, d: Divisor):
    out = {}
    for k, c in Divisor(d).items():
        q = tau(k)
        out[q] = out.get(q, 0) + c
    return Divisor(out)


def bridges(m: MetricGraph):
    """Finite edges whose removal disconnects the finite part."""
    fv = m.finite_vertices
    fe = m.finite_edges
    out = set()
    for e in fe:
        if not _connected(fv, [x for x in fe if x.id != e.id]):
            out.add(e.id)
    return out


def leaf_edges(m: MetricGraph):
    """Infinite edges, reported separately from bridges."""
    return {e.id for e in m.edges.values() if e.length == INF}


def distances(m: MetricGraph, source):
    """Exact shortest-path distances over finite edges (Dijkstra)."""
    import heapq
    dist = {source: Fraction(0)}
    heap = [(Fraction(0), 0, source)]
    tick = 1
    while heap:
        d, _, v = heapq.heappop(heap)
        if d > dist.get(v, d):
            continue
        for eid, k in m.incident(v):
            e = m.edges[eid]
            if e.length == INF:
                continue
            w = e.ends[1 - k]
            nd = d + e.length
            if w not in dist or nd < dist[w]:
                dist[w] = nd
                heapq.heappush(heap, (nd, tick, w))
                tick += 1
    return dist


# -- standard builders ---------------------------------------------------

def circle(n=2, length=1):
    """Cycle with ``n`` vertices v0.. and ``n`` edges of the given length."""
    if n < 2:
        raise ValidationError("a loop-free circle model needs at least 2 vertices")
    vs = [f"v{i}" for i in range(n)]
    return MetricGraph.build(vs, [(f"e{i}", vs[i], vs[(i + 1) % n], length) for i in range(n)])


def banana(*lengths, genus=None):
    """Two vertices u, w joined by parallel edges e1..ek of the given lengths."""
    if len(lengths) < 1:
        raise ValidationError("banana graph needs at least one edge")
    return MetricGraph.build(["u", "w"],
                             [(f"e{i + 1}", "u", "w", ln) for i, ln in enumerate(lengths)],
                             genus)


def path(n, length=1):
    """Segment with n edges."""
    vs = [f"v{i}" for i in range(n + 1)]
    return MetricGraph.build(vs, [(f"e{i}", vs[i], vs[i + 1], length) for i in range(n)])


def point_graph(g=0):
    return MetricGraph.build(["p"], [], {"p": g})
