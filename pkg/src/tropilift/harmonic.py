"""Morphisms of metric graphs: validation, local degrees, ramification.

A morphism is stored on explicit models.  Each source edge either maps onto
one target edge as a dilation by an integer factor, or is contracted to a
target vertex.  Tangent directions are edge-ends ``(edge id, end index)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import NotHarmonicError, ValidationError
from .graph import (INF, Divisor, Edge, MetricGraph, Point, canonical_divisor,
                    first_betti, validate_model)


@dataclass(frozen=True)
class Contracted:
    vertex: str


class Morphism:
    """phi: source -> target given by vertex/edge maps and edge degrees."""

    def __init__(self, source: MetricGraph, target: MetricGraph, vertex_map, edge_map,
                 edge_degree=None, point_degrees=None):
        self.source = source
        self.target = target
        self.vertex_map = dict(vertex_map)
        em = {}
        for k, v in dict(edge_map).items():
            if isinstance(v, dict):
                v = Contracted(v["contracted_to"]) if "contracted_to" in v else v["edge"]
            em[k] = v
        self.edge_map = em
        if edge_degree is None:
            edge_degree = infer_degrees(source, target, em)
        self.edge_degree = {k: int(v) for k, v in dict(edge_degree).items()}
        self.point_degrees = dict(point_degrees) if point_degrees else None
        self._ld = {}

    # -- geometry --------------------------------------------------------
    def target_vertex(self, v):
        return self.vertex_map[v]

    def is_contracted(self, e):
        return isinstance(self.edge_map[e], Contracted)

    def aligned(self, e):
        """True if ends[0] of source edge e maps to ends[0] of its image edge."""
        f = self.target.edges[self.edge_map[e]]
        return self.vertex_map[self.source.edges[e].ends[0]] == f.ends[0]

    def image_point(self, p):
        p = self.source.canonical_point(p)
        if p.is_vertex:
            return Point.at(self.vertex_map[p.vertex])
        img = self.edge_map[p.edge]
        if isinstance(img, Contracted):
            return Point.at(img.vertex)
        d = self.edge_degree[p.edge]
        f = self.target.edges[img]
        t = d * p.offset if self.aligned(p.edge) else f.length - d * p.offset
        return self.target.point(edge=img, offset=t)

    def direction_image(self, v, eid):
        """Target edge met by the source direction (v, eid), or None if contracted."""
        img = self.edge_map[eid]
        return None if isinstance(img, Contracted) else img

    # -- degrees -----------------------------------------------------------
    def direction_sums(self, v):
        x = self.vertex_map[v]
        sums = {f: 0 for f, _ in self.target.incident(x)}
        for eid, _ in self.source.incident(v):
            f = self.direction_image(v, eid)
            if f is not None:
                sums[f] = sums.get(f, 0) + self.edge_degree[eid]
        return sums

    def local_degree(self, v):
        if v in self._ld:
            return self._ld[v]
        x = self.vertex_map[v]
        if not self.target.incident(x):
            if not self.point_degrees or v not in self.point_degrees:
                raise ValidationError("degrees required for point target")
            out = int(self.point_degrees[v])
        else:
            sums = self.direction_sums(v)
            vals = set(sums.values())
            if len(vals) != 1:
                raise NotHarmonicError(f"vertex {v!r}: direction sums {sums}")
            out = vals.pop()
        self._ld[v] = out
        return out

    def degree_at_point(self, p):
        """d_p for a vertex, or the edge degree for an interior point."""
        p = self.source.canonical_point(p)
        if p.is_vertex:
            return self.local_degree(p.vertex)
        return self.edge_degree[p.edge]

    def fiber(self, x):
        """Source vertices over the target vertex x."""
        return [v for v in self.source.vertices if self.vertex_map[v] == x]

    def __repr__(self):
        return f"Morphism({self.source!r} -> {self.target!r})"


def infer_degrees(source, target, edge_map):
    """Edge degrees from length ratios; infinite edges default to degree 1."""
    out = {}
    for eid, img in edge_map.items():
        if isinstance(img, Contracted):
            out[eid] = 0
            continue
        le, lf = source.edges[eid].length, target.edges[img].length
        if le == INF or lf == INF:
            out[eid] = 1
            continue
        r = Fraction(lf) / le
        if r.denominator != 1:
            raise ValidationError(f"edge {eid!r}: length ratio {r} is not an integer")
        out[eid] = int(r)
    return out


def validate_morphism(phi: Morphism):
    """List violated morphism invariants; empty means valid."""
    diag = []
    S, T = phi.source, phi.target
    for name, m in (("source", S), ("target", T)):
        for d in validate_model(m):
            diag.append(f"{name}: {d}")
    for v in S.vertices:
        if v not in phi.vertex_map:
            diag.append(f"vertex {v!r}: not mapped")
        elif phi.vertex_map[v] not in T._inc:
            diag.append(f"vertex {v!r}: image {phi.vertex_map[v]!r} is not a target vertex")
    for v in phi.vertex_map:
        if v not in S._inc:
            diag.append(f"vertex map: unknown source vertex {v!r}")
    if diag:
        return diag
    for v in S.infinite:
        x = phi.vertex_map[v]
        img = phi.edge_map.get(S.incident(v)[0][0]) if S.incident(v) else None
        if not isinstance(img, Contracted) and x not in T.infinite:
            diag.append(f"vertex {v!r}: infinite vertex must map to an infinite vertex")
    for e in S.edges.values():
        if e.id not in phi.edge_map:
            diag.append(f"edge {e.id!r}: not mapped")
            continue
        img = phi.edge_map[e.id]
        d = phi.edge_degree.get(e.id)
        if d is None or d < 0:
            diag.append(f"edge {e.id!r}: missing or negative degree")
            continue
        a, b = (phi.vertex_map[x] for x in e.ends)
        if isinstance(img, Contracted):
            if d != 0:
                diag.append(f"edge {e.id!r}: contracted edge must have degree 0")
            if img.vertex not in T._inc:
                diag.append(f"edge {e.id!r}: unknown contraction vertex {img.vertex!r}")
            elif a != img.vertex or b != img.vertex:
                diag.append(f"edge {e.id!r}: endpoints do not map to the contraction vertex")
            continue
        if img not in T.edges:
            diag.append(f"edge {e.id!r}: unknown target edge {img!r}")
            continue
        if d == 0:
            diag.append(f"edge {e.id!r}: degree 0 on a non-contracted edge")
            continue
        f = T.edges[img]
        if {a, b} != set(f.ends):
            diag.append(f"edge {e.id!r}: endpoints map to {a!r},{b!r}, not to the ends of {img!r}")
            continue
        if (e.length == INF) != (f.length == INF):
            diag.append(f"edge {e.id!r}: finite/infinite mismatch with {img!r}")
        elif e.length != INF and f.length != d * e.length:
            diag.append(f"edge {e.id!r}: length mismatch, need l({img})={d}*l({e.id})")
    if phi.point_degrees is None and len(T.vertices) == 1 and not T.edges:
        diag.append("degrees required for point target")
    return diag


def _check_valid(phi):
    diag = validate_morphism(phi)
    if diag:
        raise ValidationError("; ".join(diag), diag)


def local_degree(phi: Morphism, v):
    """d_v(phi), or raise NotHarmonicError naming the disagreeing directions."""
    return phi.local_degree(v)


def non_harmonic_vertices(phi: Morphism):
    bad = []
    for v in phi.source.vertices:
        try:
            phi.local_degree(v)
        except NotHarmonicError:
            bad.append(v)
    return bad


def is_surjective(phi: Morphism):
    hit_e = {img for e, img in phi.edge_map.items() if not isinstance(img, Contracted)}
    hit_v = set(phi.vertex_map.values())
    return hit_e >= set(phi.target.edges) and hit_v >= set(phi.target.vertices)


def is_harmonic(phi: Morphism):
    if validate_morphism(phi):
        return False
    return not non_harmonic_vertices(phi) and is_surjective(phi)


def degree(phi: Morphism):
    _check_valid(phi)
    bad = non_harmonic_vertices(phi)
    if bad:
        raise NotHarmonicError(f"not harmonic at {bad}")
    if not is_surjective(phi):
        raise NotHarmonicError("morphism is not surjective")
    sums = {x: 0 for x in phi.target.vertices}
    for v in phi.source.vertices:
        sums[phi.vertex_map[v]] += phi.local_degree(v)
    vals = set(sums.values())
    if len(vals) != 1:
        raise NotHarmonicError(f"fiber degrees differ: {sums}")
    return vals.pop()


def is_finite(phi: Morphism):
    return all(d > 0 for d in phi.edge_degree.values())


def ramification(phi: Morphism, g_source=None, g_target=None):
    """Return (R as a Divisor on source vertices, {v: r_v} for d_v != 0)."""
    gs = phi.source.genus if g_source is None else g_source
    gt = phi.target.genus if g_target is None else g_target
    R, r = {}, {}
    for v in phi.source.vertices:
        d = phi.local_degree(v)
        x = phi.vertex_map[v]
        dirs = [phi.edge_degree[e] for e, _ in phi.source.incident(v)]
        val = d * (2 - 2 * gt.get(x, 0)) - (2 - 2 * gs.get(v, 0)) - sum(k - 1 for k in dirs)
        R[v] = val
        if d != 0:
            r[v] = val - sum(1 for k in dirs if k == 0)
    return Divisor(R), r


def ramification_divisor(phi, g_source=None, g_target=None):
    return ramification(phi, g_source, g_target)


def pushforward_divisor(phi: Morphism, D):
    out = {}
    for p, c in Divisor(D).items():
        q = phi.image_point(p)
        out[q] = out.get(q, 0) + c
    return Divisor(out)


def pullback_point(phi: Morphism, x):
    x = phi.target.canonical_point(x)
    out = {}
    if x.is_vertex:
        for v in phi.fiber(x.vertex):
            d = phi.local_degree(v)
            if d:
                out[Point.at(v)] = d
        return Divisor(out)
    f = phi.target.edges[x.edge]
    for e in phi.source.edges.values():
        if phi.edge_map[e.id] != x.edge:
            continue
        d = phi.edge_degree[e.id]
        t = x.offset / d if phi.aligned(e.id) else (f.length - x.offset) / d
        out[phi.source.point(edge=e.id, offset=t)] = d
    return Divisor(out)


def pullback_divisor(phi: Morphism, D):
    out = Divisor()
    for x, c in Divisor(D).items():
        out = out + pullback_point(phi, x) * c
    return out


def fiber_divisor(phi: Morphism, x):
    return pullback_point(phi, x)


def riemann_hurwitz_check(phi: Morphism, g_source=None, g_target=None):
    gs = phi.source.genus if g_source is None else g_source
    gt = phi.target.genus if g_target is None else g_target
    R, _ = ramification(phi, gs, gt)
    lhs = canonical_divisor(phi.source, gs)
    rhs = pullback_divisor(phi, canonical_divisor(phi.target, gt)) + R
    return lhs == rhs


def is_effective(phi: Morphism, g_source=None, g_target=None):
    _, r = ramification(phi, g_source, g_target)
    return all(val >= 0 for v, val in r.items() if v not in phi.source.infinite)


def is_etale(phi: Morphism, g_source=None, g_target=None):
    R, _ = ramification(phi, g_source, g_target)
    return len(R) == 0


def is_generically_etale(phi: Morphism, g_source=None, g_target=None):
    R, _ = ramification(phi, g_source, g_target)
    return all(p.vertex in phi.source.infinite for p in R)


def is_tame(phi: Morphism, char_p=0):
    if char_p == 0:
        return True
    return all(gcd(d, char_p) == 1 for d in phi.edge_degree.values() if d)


def local_partitions(phi: Morphism, v):
    """One partition of d_v per target direction at phi(v) (zeros dropped)."""
    x = phi.vertex_map[v]
    parts = {f: [] for f, _ in phi.target.incident(x)}
    for eid, _ in phi.source.incident(v):
        f = phi.direction_image(v, eid)
        if f is not None and phi.edge_degree[eid]:
            parts[f].append(phi.edge_degree[eid])
    return [tuple(sorted(p, reverse=True)) for p in parts.values()]


# -- weak resolution -------------------------------------------------------

@dataclass
class WeakResolution:
    morphism: Morphism
    added_degree: int
    non_regular: list
    resolved_edges: list


class _Builder:
    """Mutable accumulator for source/target graphs and the map between them."""

    def __init__(self, phi):
        S, T = phi.source, phi.target
        self.sv = list(S.vertices)
        self.se = list(S.edges.values())
        self.sg = dict(S.genus)
        self.sinf = set(S.infinite)
        self.tv = list(T.vertices)
        self.te = list(T.edges.values())
        self.tinf = set(T.infinite)
        self.vmap = dict(phi.vertex_map)
        self.emap = dict(phi.edge_map)
        self.deg = dict(phi.edge_degree)
        self.names = set(self.sv) | {e.id for e in self.se} | set(self.tv) | {e.id for e in self.te}
        self.k = 0

    def fresh(self, stem):
        while True:
            self.k += 1
            n = f"{stem}{self.k}"
            if n not in self.names:
                self.names.add(n)
                return n

    def source_edge(self, a, b, length, img, d):
        eid = self.fresh("wre")
        self.se.append(Edge(eid, (a, b), length))
        self.emap[eid] = img
        self.deg[eid] = d
        return eid

    def graft(self, root, tree_edges, tree_root, tinf):
        """Attach an isometric degree-1 copy of a target subtree at source vertex ``root``."""
        copy = {tree_root: root}
        stack = [tree_root]
        adj = {}
        for f in tree_edges:
            adj.setdefault(f.ends[0], []).append(f)
            adj.setdefault(f.ends[1], []).append(f)
        seen = {tree_root}
        while stack:
            y = stack.pop()
            for f in adj.get(y, ()):
                z = f.other(y)
                if z in seen:
                    continue
                seen.add(z)
                nv = self.fresh("wrv")
                self.sv.append(nv)
                self.vmap[nv] = z
                if z in tinf:
                    self.sinf.add(nv)
                copy[z] = nv
                a, b = (copy[y], nv) if f.ends[0] == y else (nv, copy[y])
                self.source_edge(a, b, f.length, f.id, 1)
                stack.append(z)

    def build(self, phi):
        S = MetricGraph(self.sv, self.se, self.sg, self.sinf)
        T = MetricGraph(self.tv, self.te, phi.target.genus, self.tinf)
        return Morphism(S, T, self.vmap, self.emap, self.deg)


def weak_resolution(phi: Morphism) -> WeakResolution:
    """Make a harmonic morphism to a tree finite by modifying source and target.

    Phase 1 grafts a degree-1 copy of the target tree at every finite vertex
    around which phi is constant.  Phase 2 replaces each contracted edge by
    its two halves mapping onto a new target leg, with two infinite legs at
    the midpoint, then pads every vertex over the base point with copies of
    that leg until it is harmonic again.
    """
    _check_valid(phi)
    T = phi.target
    if first_betti(T) != 0:
        raise ValidationError("target is not a tree")
    if not T.edges:
        raise ValidationError("target must have at least one edge")
    bad = non_harmonic_vertices(phi)
    if bad:
        raise NotHarmonicError(f"not harmonic at {bad}")
    if is_finite(phi):
        return WeakResolution(phi, 0, [], [])
    S = phi.source
    B = _Builder(phi)
    non_regular = [v for v in S.vertices if v not in S.infinite
                   and all(phi.edge_degree[e] == 0 for e, _ in S.incident(v))]
    for v in non_regular:
        B.graft(v, list(T.edges.values()), phi.vertex_map[v], T.infinite)
    # local degrees after phase 1
    mid = B.build(phi)
    dv = {v: mid.local_degree(v) for v in mid.source.vertices}

    contracted = [e for e in S.edges.values() if phi.edge_degree[e.id] == 0]
    for e in contracted:
        w = phi.edge_map[e.id].vertex
        # drop the contracted edge from the accumulator
        B.se = [x for x in B.se if x.id != e.id]
        del B.emap[e.id], B.deg[e.id]
        a, b = e.ends
        if e.length == INF:
            tinf = B.fresh("wrt")
            leg = B.fresh("wrf")
            B.tv.append(tinf)
            B.tinf.add(tinf)
            B.te.append(Edge(leg, (w, tinf), INF))
            B.vmap[b] = tinf
            B.source_edge(a, b, INF, leg, 1)
            over = {a: 1}
            leg_data = (leg, INF, None, None, tinf)
        else:
            half = e.length / 2
            c = B.fresh("wrt")
            cinf = B.fresh("wrt")
            f0, finf = B.fresh("wrf"), B.fresh("wrf")
            B.tv += [c, cinf]
            B.tinf.add(cinf)
            B.te += [Edge(f0, (w, c), half), Edge(finf, (c, cinf), INF)]
            m = B.fresh("wrv")
            B.sv.append(m)
            B.vmap[m] = c
            B.source_edge(a, m, half, f0, 1)
            B.source_edge(b, m, half, f0, 1)
            for _ in range(2):
                z = B.fresh("wrv")
                B.sv.append(z)
                B.sinf.add(z)
                B.vmap[z] = cinf
                B.source_edge(m, z, INF, finf, 1)
            over = {a: 1, b: 1}
            leg_data = (f0, half, c, finf, cinf)
        # pad every vertex over w up to its local degree
        for p in list(dv):
            if B.vmap.get(p) != w:
                continue
            f, ln, c, finf, tend = leg_data
            for _ in range(dv[p] - over.get(p, 0)):
                z = B.fresh("wrv")
                B.sinf.add(z)
                B.vmap[z] = tend
                if ln == INF:
                    B.sv.append(z)
                    B.source_edge(p, z, INF, f, 1)
                else:
                    y = B.fresh("wrv")
                    B.sv += [y, z]
                    B.vmap[y] = c
                    B.source_edge(p, y, ln, f, 1)
                    B.source_edge(y, z, INF, finf, 1)
    out = B.build(phi)
    return WeakResolution(out, len(non_regular), non_regular, [e.id for e in contracted])
