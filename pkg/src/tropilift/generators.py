"""Random harmonic morphisms for property tests.

Construction ("quotient then perturb"): take a random target, build the
degree-d permutation cover over it, glue vertices inside fibres (a quotient
of the cover, which stays harmonic), bundle parallel sheets into higher
degree edges, keep one connected component, then perturb by hanging
contracted edges off random vertices and assigning random genera.
"""
from __future__ import annotations

import random
from fractions import Fraction

from .graph import Edge, MetricGraph
from .harmonic import Contracted, Morphism


def random_tree(rng: random.Random, n_edges, max_len=3):
    vs = ["x0"]
    es = []
    for i in range(1, n_edges + 1):
        parent = rng.choice(vs)
        vs.append(f"x{i}")
        es.append(Edge(f"f{i}", (parent, f"x{i}"), Fraction(rng.randint(1, max_len))))
    return MetricGraph(vs, es)


def random_graph(rng: random.Random, n_vertices, n_extra, max_len=3):
    """Random connected loop-free graph: a random tree plus extra edges."""
    T = random_tree(rng, n_vertices - 1, max_len)
    es = list(T.edges.values())
    for j in range(n_extra):
        a, b = rng.sample(T.vertices, 2) if n_vertices > 1 else (None, None)
        if a is None:
            break
        es.append(Edge(f"h{j}", (a, b), Fraction(rng.randint(1, max_len))))
    return MetricGraph(T.vertices, es)


def _component(vs, es, start):
    adj = {v: [] for v in vs}
    for e in es:
        adj[e.ends[0]].append(e.ends[1])
        adj[e.ends[1]].append(e.ends[0])
    seen, stack = {start}, [start]
    while stack:
        for w in adj[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return seen


def random_cover(rng: random.Random, T: MetricGraph, d, glue=0.3, bundle=0.5):
    """Finite harmonic morphism onto T obtained as a quotient of a permutation cover."""
    perm = {}
    for f in T.edges:
        p = list(range(d))
        rng.shuffle(p)
        perm[f] = p
    # glue vertices inside each fibre
    label = {}
    for x in T.vertices:
        blocks = []
        for i in range(d):
            if blocks and rng.random() < glue:
                rng.choice(blocks).append(i)
            else:
                blocks.append([i])
        for b, block in enumerate(blocks):
            for i in block:
                label[(x, i)] = f"{x}.{b}"
    sheets = {}
    for f, e in T.edges.items():
        a, b = e.ends
        for i in range(d):
            key = (f, label[(a, i)], label[(b, perm[f][i])])
            sheets.setdefault(key, []).append(1)
    es, emap, deg = [], {}, {}
    for (f, u, w), ones in sheets.items():
        parts = []
        for one in ones:
            if parts and rng.random() < bundle:
                parts[-1] += one
            else:
                parts.append(one)
        for k, m in enumerate(parts):
            eid = f"{f}:{u}:{w}:{k}"
            es.append(Edge(eid, (u, w), T.edges[f].length / m))
            emap[eid] = f
            deg[eid] = m
    vs = sorted(set(label.values()))
    keep = _component(vs, es, vs[0])
    vs = [v for v in vs if v in keep]
    es = [e for e in es if e.ends[0] in keep]
    S = MetricGraph(vs, es)
    vmap = {v: v.rsplit(".", 1)[0] for v in vs}
    return Morphism(S, T, vmap, {e.id: emap[e.id] for e in es}, {e.id: deg[e.id] for e in es})


def perturb(rng: random.Random, phi: Morphism, n_contracted=2, max_genus=2):
    """Hang contracted edges off random vertices and assign random genera."""
    S = phi.source
    vs, es = list(S.vertices), list(S.edges.values())
    vmap, emap, deg = dict(phi.vertex_map), dict(phi.edge_map), dict(phi.edge_degree)
    for j in range(n_contracted):
        v = rng.choice(vs)
        w = f"c{j}"
        vs.append(w)
        es.append(Edge(f"k{j}", (v, w), Fraction(rng.randint(1, 3))))
        vmap[w] = vmap[v]
        emap[f"k{j}"] = Contracted(vmap[v])
        deg[f"k{j}"] = 0
    gs = {v: rng.randint(0, max_genus) for v in vs}
    gt = {x: rng.randint(0, max_genus) for x in phi.target.vertices}
    S2 = MetricGraph(vs, es, gs)
    T2 = MetricGraph(phi.target.vertices, list(phi.target.edges.values()), gt)
    return Morphism(S2, T2, vmap, emap, deg)


def random_harmonic_morphism(seed, max_degree=3, max_target_vertices=4):
    """Random augmented harmonic morphism, possibly with contracted edges."""
    rng = random.Random(seed)
    n = rng.randint(2, max_target_vertices)
    T = random_graph(rng, n, rng.randint(0, 2))
    phi = random_cover(rng, T, rng.randint(1, max_degree))
    return perturb(rng, phi, rng.randint(0, 2))


def random_finite_morphism_to_tree(seed, max_degree=3, max_target_edges=3):
    """Random finite harmonic morphism onto a metric tree (genus 0 everywhere)."""
    rng = random.Random(seed)
    T = random_tree(rng, rng.randint(1, max_target_edges))
    return random_cover(rng, T, rng.randint(2, max_degree))
