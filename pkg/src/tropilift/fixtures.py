"""Named built-in instances used by tests, demos and the CLI."""
from fractions import Fraction

from .graph import INF, MetricGraph, banana, circle
from .harmonic import Morphism


def star_map():
    """Degree-4 map from a 6-legged star onto a 3-legged star, all genus 0.

    Leg degrees over the three target legs are (2,2), (2,2) and (3,1).
    """
    T = MetricGraph.build(["x", "y1", "y2", "y3"],
                          [(f"f{i}", "x", f"y{i}", "inf") for i in (1, 2, 3)],
                          infinite=["y1", "y2", "y3"])
    degs = {1: (2, 2), 2: (2, 2), 3: (3, 1)}
    vs, es, vmap, emap, dmap = ["p"], [], {"p": "x"}, {}, {}
    for i, ds in degs.items():
        for j, d in enumerate(ds, 1):
            q = f"q{i}{j}"
            vs.append(q)
            es.append((f"e{i}{j}", "p", q, "inf"))
            vmap[q] = f"y{i}"
            emap[f"e{i}{j}"] = f"f{i}"
            dmap[f"e{i}{j}"] = d
    S = MetricGraph.build(vs, es, infinite=vs[1:])
    return Morphism(S, T, vmap, emap, dmap)


def tate_isogeny(circumference=2):
    """Degree-2 map of circles: circumference L/2 onto L, both edges of degree 2."""
    L = Fraction(circumference)
    T = MetricGraph.build(["y", "z"], [("f1", "y", "z", L / 2), ("f2", "z", "y", L / 2)])
    S = MetricGraph.build(["y'", "z'"], [("e1", "y'", "z'", L / 4), ("e2", "z'", "y'", L / 4)])
    return Morphism(S, T, {"y'": "y", "z'": "z"}, {"e1": "f1", "e2": "f2"}, {"e1": 2, "e2": 2})


def ribet():
    """B(1,1,1,1) -> B(1,2,2): e1,e2 onto e1 with degree 1, e3 -> e2 and e4 -> e3 with degree 2."""
    S = banana(1, 1, 1, 1)
    T = banana(1, 2, 2)
    return Morphism(S, T, {"u": "u", "w": "w"},
                    {"e1": "e1", "e2": "e1", "e3": "e2", "e4": "e3"},
                    {"e1": 1, "e2": 1, "e3": 2, "e4": 2})


def hyper_family(kappa, g_p=0, bridge=1, cycle=1):
    """Centre p of genus g_p with ``kappa`` bridges, each ending at a 2-edge cycle."""
    vs, es = ["p"], []
    for i in range(1, kappa + 1):
        a, b = f"a{i}", f"b{i}"
        vs += [a, b]
        es += [(f"br{i}", "p", a, bridge), (f"c{i}x", a, b, cycle), (f"c{i}y", a, b, cycle)]
    return MetricGraph.build(vs, es, {"p": g_p})


def identity(m: MetricGraph):
    return Morphism(m, m, {v: v for v in m.vertices}, {e: e for e in m.edges},
                    {e: 1 for e in m.edges})


def fold_circle(length=1):
    """Degree-2 fold of a 2-edge circle onto a segment."""
    S = circle(2, length)
    T = MetricGraph.build(["a", "b"], [("s", "a", "b", length)])
    return Morphism(S, T, {"v0": "a", "v1": "b"}, {"e0": "s", "e1": "s"}, {"e0": 1, "e1": 1})


CATALOG = {
    "CIRCLE": lambda n=2: circle(int(n)),
    "BANANA": lambda *ls: banana(*(ls or (1, 1, 1, 1))),
    "STARMAP": star_map,
    "TATE2ISOGENY": tate_isogeny,
    "RIBET": ribet,
    "HYPER_FAMILY": lambda kappa=3, g_p=0: hyper_family(int(kappa), int(g_p)),
}


def get(name, *args):
    """Look up a fixture by catalog name, e.g. get("BANANA", 1, 2, 2)."""
    key = name.upper()
    if key not in CATALOG:
        raise KeyError(f"unknown fixture {name!r}; known: {sorted(CATALOG)}")
    return CATALOG[key](*args)
