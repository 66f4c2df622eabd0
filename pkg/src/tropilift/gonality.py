"""Budgeted search for finite effective harmonic morphisms to trees.

The search is a semi-decision: ``None`` means nothing was found within the
budget, not that no morphism exists.  Stages, tried in order:

A. trees of genus-0 vertices map to themselves (degree 1);
B. for d = 2, quotients by isometric involutions with tree quotient;
C. generic backtracking over uniform refinements of the essential model,
   growing the target tree edge by edge.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, replace
from fractions import Fraction

from .errors import ValidationError
from .graph import Edge, MetricGraph, first_betti, genus
from .harmonic import (Morphism, degree, is_effective, is_finite, is_harmonic,
                       validate_morphism)
from .hyperelliptic import _involutions, _quotient_betti, canonical_subdivision, quotient_morphism, Involution
from .lifting import liftable_augmented


@dataclass(frozen=True)
class SearchBudget:
    max_subdivisions: int = 2
    max_target_vertices: int = 64
    max_degree: int = 4
    node_limit: int = 200_000

    def __post_init__(self):
        for k, v in self.__dict__.items():
            if int(v) < 1:
                raise ValidationError(f"budget field {k} must be positive")

    @classmethod
    def default(cls):
        return cls().capped()

    def capped(self):
        """Apply the TROPILIFT_NODE_LIMIT environment cap."""
        cap = os.environ.get("TROPILIFT_NODE_LIMIT")
        if cap:
            return replace(self, node_limit=max(1, min(self.node_limit, int(cap))))
        return self


class _OutOfBudget(Exception):
    pass


def _check_input(m: MetricGraph, g):
    if m.infinite:
        raise ValidationError("gonality search needs a graph without infinite vertices")
    return m.genus if g is None else g


def accept(phi: Morphism, g_source=None, d=None):
    """Full validator for a witness: valid, harmonic, finite, effective, degree d."""
    gs = phi.source.genus if g_source is None else g_source
    if validate_morphism(phi) or not is_harmonic(phi) or not is_finite(phi):
        return False
    k = degree(phi)
    if d is not None and k != d:
        return False
    if first_betti(phi.target) != 0 or any(phi.target.genus.values()):
        return False
    if k == 1 and any(gs.get(v, 0) for v in phi.source.vertices):
        # degree-1 residue maps exist only between curves of equal genus
        return False
    return is_effective(phi, gs, {})


def _identity(m):
    return Morphism(m, m, {v: v for v in m.vertices}, {e: e for e in m.edges},
                    {e: 1 for e in m.edges})


def _split(G: MetricGraph, k):
    """Cut every edge into k equal pieces."""
    if k == 1:
        return G
    vs, es = list(G.vertices), []
    for e in G.edges.values():
        chain = [e.ends[0]] + [f"{e.id}:{i}" for i in range(1, k)] + [e.ends[1]]
        vs += chain[1:-1]
        for i in range(k):
            es.append(Edge(f"{e.id}.{i}", (chain[i], chain[i + 1]), e.length / k))
    return MetricGraph(vs, es, dict(G.genus))


def _stage_b(m, gf):
    C = canonical_subdivision(m, gf)
    for vmap in _involutions(C):
        if _quotient_betti(C, vmap) != 0:
            continue
        phi = quotient_morphism(Involution(C, vmap))
        if accept(phi, C.graph.genus, 2):
            return phi
    return None


class _TreeSearch:
    """Backtracking construction of a finite harmonic map G -> tree of degree d."""

    def __init__(self, G: MetricGraph, d, budget: SearchBudget, counter):
        self.G, self.d, self.budget, self.counter = G, d, budget, counter
        self.adj = {v: [] for v in G.vertices}
        for e in G.edges.values():
            a, b = e.ends
            self.adj[a].append((e.id, b))
            self.adj[b].append((e.id, a))
        start = G.vertices[0]
        self.order, seen = [start], {start}
        for v in self.order:
            for _, w in self.adj[v]:
                if w not in seen:
                    seen.add(w)
                    self.order.append(w)
        self.f = {start: 0}
        self.tlen = []              # target edge lengths
        self.tends = []
        self.tadj = [{}]            # target vertex -> {target vertex: edge index}
        self.load = []
        self.frozen = set()
        self.emap, self.deg = {}, {}

    def tick(self):
        self.counter[0] += 1
        if self.counter[0] > self.budget.node_limit:
            raise _OutOfBudget

    def run(self):
        yield from self._vertex(0)

    def _vertex(self, i):
        if i == len(self.order):
            yield self._build()
            return
        v = self.order[i]
        pending = [(e, w) for e, w in self.adj[v] if e not in self.emap]
        yield from self._edges(i, v, pending, 0)

    def _edges(self, i, v, pending, j):
        self.tick()
        if j == len(pending):
            if self._close(v):
                t = self.f[v]
                was = t in self.frozen
                self.frozen.add(t)
                yield from self._vertex(i + 1)
                if not was:
                    self.frozen.discard(t)
            return
        eid, w = pending[j]
        ln = self.G.edges[eid].length
        t = self.f[v]
        if w in self.f:
            k = self.tadj[t].get(self.f[w])
            options = [] if k is None else [(k, None)]
        else:
            options = [(k, None) for k in self.tadj[t].values()]
            if t not in self.frozen and len(self.tadj) < self.budget.max_target_vertices:
                options += [(None, mult) for mult in range(1, self.d + 1)]
        for k, mult in options:
            if k is not None:
                q = self.tlen[k] / ln
                if q.denominator != 1 or self.load[k] + q > self.d:
                    continue
                q = int(q)
                other = self.tends[k][1] if self.tends[k][0] == t else self.tends[k][0]
                assigned = w not in self.f
                if assigned:
                    self.f[w] = other
                self.emap[eid], self.deg[eid] = k, q
                self.load[k] += q
                yield from self._edges(i, v, pending, j + 1)
                self.load[k] -= q
                del self.emap[eid], self.deg[eid]
                if assigned:
                    del self.f[w]
            else:
                k = len(self.tlen)
                new = len(self.tadj)
                self.tlen.append(ln * mult)
                self.tends.append((t, new))
                self.tadj.append({t: k})
                self.tadj[t][new] = k
                self.load.append(mult)
                self.f[w] = new
                self.emap[eid], self.deg[eid] = k, mult
                yield from self._edges(i, v, pending, j + 1)
                del self.emap[eid], self.deg[eid], self.f[w]
                self.load.pop()
                del self.tadj[t][new]
                self.tadj.pop()
                self.tends.pop()
                self.tlen.pop()

    def _close(self, v):
        t = self.f[v]
        sums = {u: 0 for u in self.tadj[t]}
        for eid, w in self.adj[v]:
            sums[self.f[w]] += self.deg[eid]
        vals = set(sums.values())
        if not sums:
            return True
        return len(vals) == 1 and 0 not in vals

    def _build(self):
        names = [f"t{i}" for i in range(len(self.tadj))]
        T = MetricGraph(names, [Edge(f"s{k}", (names[a], names[b]), self.tlen[k])
                                for k, (a, b) in enumerate(self.tends)])
        return Morphism(self.G, T, {v: names[x] for v, x in self.f.items()},
                        {e: f"s{k}" for e, k in self.emap.items()}, dict(self.deg))


def search_morphism_to_tree(m: MetricGraph, g=None, d=2, budget: SearchBudget | None = None):
    """A degree-d finite effective harmonic morphism from a model of m to a tree, or None."""
    gf = _check_input(m, g)
    budget = budget or SearchBudget.default()
    if d < 1 or d > budget.max_degree:
        return None
    if d == 1 and first_betti(m) == 0 and not any(gf.get(v, 0) for v in m.vertices):
        return _identity(MetricGraph(m.vertices, list(m.edges.values()), gf))
    if d == 1 and first_betti(m) > 0:
        return None
    if not m.edges:
        if d == 2 and genus(m, gf) >= 1:
            return _stage_b(m, gf)
        return None
    if d == 2:
        phi = _stage_b(m, gf)
        if phi is not None:
            return phi
    base = canonical_subdivision(m, gf).graph
    counter = [0]
    for k in range(1, budget.max_subdivisions + 1):
        G = _split(base, k)
        try:
            for phi in _TreeSearch(G, d, budget, counter).run():
                if accept(phi, G.genus, d):
                    return phi
        except _OutOfBudget:
            return None
    return None


def tropical_gonality_upper(m: MetricGraph, g=None, d_max=4, budget: SearchBudget | None = None):
    """Least d <= d_max with a witness found within budget; None if none found."""
    budget = budget or SearchBudget.default()
    gf = _check_input(m, g)
    for d in range(1, min(d_max, budget.max_degree) + 1):
        phi = search_morphism_to_tree(m, gf, d, budget)
        if phi is not None:
            if d == 1 and first_betti(m) > 0:
                raise AssertionError("degree-1 finite harmonic morphism onto a tree from a cyclic graph")
            return d
    return None


def gonality_witness(m: MetricGraph, g=None, d_max=4, budget: SearchBudget | None = None):
    budget = budget or SearchBudget.default()
    gf = _check_input(m, g)
    for d in range(1, min(d_max, budget.max_degree) + 1):
        phi = search_morphism_to_tree(m, gf, d, budget)
        if phi is not None:
            return d, phi
    return None, None


def lift_obstructed_gonality(m: MetricGraph | None, g, witness: Morphism, char_p=0):
    """Run the vertex lifting test on a witness and summarize the obstruction."""
    gs = witness.source.genus if g is None else g
    ok, reports = liftable_augmented(witness, gs, witness.target.genus, char_p)
    obstructed = [r.vertex for r in reports if r.verdict == "obstructed"]
    wild = [r.vertex for r in reports if r.verdict == "wild"]
    return {
        "degree": degree(witness),
        "liftable": ok,
        "obstructed": obstructed,
        "wild": wild,
        "certifies_witness_not_liftable": bool(obstructed),
        "reports": [r.as_dict() for r in reports],
    }
