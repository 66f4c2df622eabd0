"""Hyperelliptic involutions of minimal augmented metric graphs.

Search strategy: pass to the essential model (no genus-0 vertices of
valence 2, loops allowed), then cut every non-loop edge at its midpoint and
every loop at its quarter points and midpoint.  In the resulting simple
graph every isometric involution acts without flipping an edge, so it is a
vertex permutation that preserves the flags (original vertex, edge midpoint,
loop quarter point, loop midpoint), the genus and the edge lengths.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ValidationError
from .graph import Edge, MetricGraph, Point, bridges, genus
from .harmonic import Morphism

ORIG, MID, QUARTER, LOOPMID = "vertex", "mid", "quarter", "loopmid"


def is_minimal(m: MetricGraph, g=None):
    gf = m.genus if g is None else g
    if m.infinite:
        return False
    return not any(m.valence(v) == 1 and gf.get(v, 0) == 0 for v in m.vertices)


@dataclass
class Canonical:
    graph: MetricGraph
    flags: dict
    location: dict           # original vertex -> Point on graph
    essential_edges: list    # (id, a, b, length)


def essential_model(m: MetricGraph, g=None):
    """Edges of the essential model as (id, a, b, length) with loops allowed,
    plus the position of every smoothed vertex along its essential edge."""
    gf = m.genus if g is None else g
    keep = [v for v in m.vertices if not (m.valence(v) == 2 and gf.get(v, 0) == 0)]
    if not keep:
        keep = [m.vertices[0]]
    keep_set = set(keep)
    used = set()
    edges, inside = [], {}
    for a in keep:
        for eid, k in m.incident(a):
            if eid in used:
                continue
            total, cur, via, path = Fraction(0), a, eid, []
            while True:
                used.add(via)
                e = m.edges[via]
                total += e.length
                nxt = e.ends[1] if e.ends[0] == cur else e.ends[0]
                if e.ends[0] == e.ends[1]:
                    nxt = cur
                if nxt in keep_set:
                    break
                path.append((nxt, total))
                (n1, _), (n2, _) = m.incident(nxt)
                via = n2 if n1 == via else n1
                cur = nxt
            ess = f"E{len(edges)}"
            edges.append((ess, a, nxt, total))
            for w, t in path:
                inside[w] = (ess, t)
    return keep, edges, inside


def canonical_subdivision(m: MetricGraph, g=None) -> Canonical:
    gf = m.genus if g is None else g
    keep, edges, inside = essential_model(m, gf)
    vs = list(keep)
    flags = {v: ORIG for v in keep}
    es = []
    place = {}
    for ess, a, b, L in edges:
        if a != b:
            mid = f"{ess}/m"
            vs.append(mid)
            flags[mid] = MID
            es += [Edge(f"{ess}/0", (a, mid), L / 2), Edge(f"{ess}/1", (mid, b), L / 2)]
            place[ess] = [(Fraction(0), a), (L / 2, mid), (L, b)]
        else:
            q1, mid, q2 = f"{ess}/q1", f"{ess}/m", f"{ess}/q2"
            vs += [q1, mid, q2]
            flags.update({q1: QUARTER, mid: LOOPMID, q2: QUARTER})
            chain = [a, q1, mid, q2, a]
            for i in range(4):
                es.append(Edge(f"{ess}/{i}", (chain[i], chain[i + 1]), L / 4))
            place[ess] = [(L * i / 4, chain[i]) for i in range(5)]
    graph = MetricGraph(vs, es, {v: gf.get(v, 0) for v in keep})
    location = {v: Point.at(v) for v in keep}
    for w, (ess, t) in inside.items():
        marks = place[ess]
        for i in range(len(marks) - 1):
            t0, x = marks[i]
            t1, y = marks[i + 1]
            if t == t0:
                location[w] = Point.at(x)
                break
            if t0 < t < t1:
                location[w] = Point.on(f"{ess}/{i}", t - t0)
                break
    return Canonical(graph, flags, location, edges)


@dataclass
class Involution:
    canonical: Canonical
    vmap: dict
    quotient_is_tree: bool = True
    fixed: list = field(default_factory=list)

    @property
    def graph(self):
        return self.canonical.graph

    def edge_image(self, eid):
        G = self.graph
        a, b = G.edges[eid].ends
        return _edge_between(G)[(self.vmap[a], self.vmap[b])]

    def image(self, p):
        """Image of a Point of the canonical graph."""
        if p.is_vertex:
            return Point.at(self.vmap[p.vertex])
        f = self.edge_image(p.edge)
        e = self.graph.edges[p.edge]
        same = self.graph.edges[f].ends[0] == self.vmap[e.ends[0]]
        return Point.on(f, p.offset if same else e.length - p.offset)

    def is_identity(self):
        return all(k == v for k, v in self.vmap.items())


def _edge_between(G):
    out = {}
    for e in G.edges.values():
        a, b = e.ends
        out[(a, b)] = e.id
        out[(b, a)] = e.id
    return out


def _involutions(C: Canonical):
    """All flag-, genus- and length-preserving involutive automorphisms."""
    G = C.graph
    adj = {v: {} for v in G.vertices}
    for e in G.edges.values():
        a, b = e.ends
        adj[a][b] = e.length
        adj[b][a] = e.length
    attrs = {v: (C.flags[v], G.genus.get(v, 0), len(adj[v]), tuple(sorted(adj[v].values())))
             for v in G.vertices}
    start = G.vertices[0]
    order, seen = [start], {start}
    for v in order:
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                order.append(w)
    parent = {}
    for v in order:
        for w in adj[v]:
            parent.setdefault(w, v)
    parent.pop(start, None)
    sigma = {}
    out = []

    def ok(v):
        sv = sigma[v]
        for u, ln in adj[v].items():
            if u in sigma and adj[sv].get(sigma[u]) != ln:
                return False
        return True

    def rec(i):
        while i < len(order) and order[i] in sigma:
            i += 1
        if i == len(order):
            out.append(dict(sigma))
            return
        v = order[i]
        if v in parent:
            u = parent[v]
            cands = [w for w, ln in adj[sigma[u]].items() if ln == adj[v][u]]
        else:
            cands = list(G.vertices)
        for w in cands:
            if attrs[w] != attrs[v]:
                continue
            if G.genus.get(v, 0) > 0 and w != v:
                continue
            if w in sigma:
                continue
            sigma[v] = w
            sigma[w] = v
            if ok(v) and ok(w):
                rec(i + 1)
            del sigma[v]
            sigma.pop(w, None)

    rec(0)
    return out


def _quotient_betti(C: Canonical, vmap):
    G = C.graph
    orbits = {v: min(v, vmap[v]) for v in G.vertices}
    eb = _edge_between(G)
    eorb = set()
    for e in G.edges.values():
        a, b = e.ends
        f = eb[(vmap[a], vmap[b])]
        eorb.add(min(e.id, f))
    return len(eorb) - len(set(orbits.values())) + 1


def _bridges_fixed(C: Canonical, vmap):
    G = C.graph
    for eid in bridges(G):
        a, b = G.edges[eid].ends
        if vmap[a] != a or vmap[b] != b:
            return False
    return True


def hyperelliptic_involutions(m: MetricGraph, g=None):
    """Every qualifying involution (normally at most one)."""
    gf = m.genus if g is None else g
    if not is_minimal(m, gf):
        raise ValidationError("graph is not minimal")
    if genus(m, gf) < 2:
        raise ValidationError("genus must be at least 2")
    C = canonical_subdivision(m, gf)
    found = []
    for vmap in _involutions(C):
        if _quotient_betti(C, vmap) == 0 and _bridges_fixed(C, vmap):
            found.append(Involution(C, vmap, True, [v for v in vmap if vmap[v] == v]))
    return found


def find_hyperelliptic_involution(m: MetricGraph, g=None):
    found = hyperelliptic_involutions(m, g)
    if len(found) > 1:
        raise AssertionError(f"{len(found)} distinct hyperelliptic involutions found")
    return found[0] if found else None


def kappa(s: Involution, p):
    """Number of tangent directions at p fixed by s.

    ``p`` is a vertex name of the canonical graph, an original vertex name,
    or a Point of the canonical graph.
    """
    C = s.canonical
    if not isinstance(p, Point):
        if p in C.location:
            p = C.location[p]
        elif p in s.graph.vertices:
            p = Point.at(p)
        else:
            raise ValidationError(f"unknown point {p!r}")
    if s.image(p) != p:
        raise ValidationError(f"{p!r} is not fixed by the involution")
    if not p.is_vertex:
        return 2 if s.vmap[s.graph.edges[p.edge].ends[0]] == s.graph.edges[p.edge].ends[0] else 0
    v = p.vertex
    return sum(1 for w in s.graph.neighbors(v) if s.vmap[w] == w)


def quotient_morphism(s: Involution):
    """Degree-2 harmonic map from the canonical graph onto the quotient tree."""
    G = s.graph
    orb = {v: "[" + min(v, s.vmap[v]) + "]" for v in G.vertices}
    tv = sorted(set(orb.values()), key=lambda x: list(orb.values()).index(x))
    tes, emap, deg = {}, {}, {}
    for e in G.edges.values():
        f = s.edge_image(e.id)
        name = "[" + min(e.id, f) + "]"
        fixed = f == e.id
        emap[e.id] = name
        deg[e.id] = 2 if fixed else 1
        if name not in tes:
            a, b = e.ends
            tes[name] = Edge(name, (orb[a], orb[b]), e.length * (2 if fixed else 1))
    T = MetricGraph(tv, list(tes.values()))
    pdeg = None
    if not G.edges:
        pdeg = {v: 2 for v in G.vertices}
    return Morphism(G, T, orb, emap, deg, pdeg)


def is_hyperelliptic(m: MetricGraph, g=None):
    return find_hyperelliptic_involution(m, g) is not None


def is_hyperelliptic_by_rank(m: MetricGraph, g=None):
    """Search degree-2 divisors on canonical vertices with weighted rank 1."""
    from .divisors import weighted_rank
    from .graph import Divisor
    gf = m.genus if g is None else g
    C = canonical_subdivision(m, gf)
    G = C.graph
    vs = list(G.vertices)
    for i, a in enumerate(vs):
        for b in vs[i:]:
            if weighted_rank(G, G.genus, Divisor({a: 1}) + {b: 1}) >= 1:
                return True
    return False


def bridge_counts(m: MetricGraph):
    out = {v: 0 for v in m.vertices}
    for eid in bridges(m):
        for x in m.edges[eid].ends:
            out[x] += 1
    return out


@dataclass
class HyperReport:
    hyperelliptic: bool
    liftable: bool
    involution: Involution | None
    kappa: dict
    bridge_counts: dict


def liftable_hyperelliptic(m: MetricGraph, g=None, report=False):
    """Hyperelliptic and 2 g(p) >= kappa(p) - 2 at every fixed point.

    The bridge-count form (at most 2 g(p) + 2 bridges at p) is evaluated too
    and must agree.
    """
    gf = m.genus if g is None else g
    s = find_hyperelliptic_involution(m, gf)
    if s is None:
        out = HyperReport(False, False, None, {}, {})
        return out if report else False
    G = s.graph
    kap = {v: kappa(s, v) for v in G.vertices if s.vmap[v] == v}
    by_kappa = all(2 * G.genus.get(v, 0) >= k - 2 for v, k in kap.items())
    bc = bridge_counts(G)
    by_bridges = all(c <= 2 * G.genus.get(v, 0) + 2 for v, c in bc.items())
    if by_kappa != by_bridges:
        raise AssertionError("kappa criterion and bridge criterion disagree")
    out = HyperReport(True, by_kappa, s, kap, bc)
    return out if report else by_kappa
