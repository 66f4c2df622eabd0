"""JSON and DOT input/output.

Lengths and offsets are "p/q" strings (or "inf"); floats are rejected.
Errors carry a JSON pointer to the offending value.
"""
from __future__ import annotations

import json
from fractions import Fraction

from .errors import ParseError, ValidationError
from .graph import INF, Divisor, Edge, MetricGraph, Point, as_length, fmt_q
from .harmonic import Contracted, Morphism, validate_morphism


def _ptr(*parts):
    return "".join("/" + str(p).replace("~", "~0").replace("/", "~1") for p in parts)


def _need(obj, kind, path):
    if not isinstance(obj, kind):
        name = kind.__name__ if isinstance(kind, type) else "/".join(k.__name__ for k in kind)
        raise ParseError(f"expected {name}, got {type(obj).__name__}", path)
    return obj


def _int(x, path, minimum=None):
    if isinstance(x, bool) or not isinstance(x, int):
        raise ParseError(f"expected integer, got {x!r}", path)
    if minimum is not None and x < minimum:
        raise ParseError(f"must be >= {minimum}", path)
    return x


def parse_rational(x, path="", allow_inf=False):
    if isinstance(x, bool) or isinstance(x, float):
        raise ParseError(f"rationals must be ints or 'p/q' strings, got {x!r}", path)
    try:
        val = as_length(x) if isinstance(x, (str, int)) else None
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"malformed rational {x!r}: {exc}", path) from None
    if val is None:
        raise ParseError(f"malformed rational {x!r}", path)
    if val == INF and not allow_inf:
        raise ParseError("infinite value not allowed here", path)
    return val


def parse_graph(data, path=""):
    _need(data, dict, path)
    verts = _need(data.get("vertices"), list, path + "/vertices")
    edges = _need(data.get("edges", []), list, path + "/edges")
    ids, genus, infinite = [], {}, []
    for i, v in enumerate(verts):
        p = f"{path}/vertices/{i}"
        _need(v, dict, p)
        vid = _need(v.get("id"), str, p + "/id")
        if vid in genus:
            raise ParseError(f"duplicate vertex id {vid!r}", p + "/id")
        ids.append(vid)
        genus[vid] = _int(v.get("genus", 0), p + "/genus", 0)
        if _need(v.get("infinite", False), bool, p + "/infinite"):
            infinite.append(vid)
    es, seen = [], set()
    for i, e in enumerate(edges):
        p = f"{path}/edges/{i}"
        _need(e, dict, p)
        eid = _need(e.get("id"), str, p + "/id")
        if eid in seen:
            raise ParseError(f"duplicate edge id {eid!r}", p + "/id")
        seen.add(eid)
        ends = _need(e.get("ends"), list, p + "/ends")
        if len(ends) != 2:
            raise ParseError("an edge needs exactly two ends", p + "/ends")
        for k, x in enumerate(ends):
            if x not in genus:
                raise ParseError(f"unknown vertex id {x!r}", f"{p}/ends/{k}")
        es.append((eid, ends[0], ends[1], parse_rational(e.get("length"), p + "/length", True)))
    return MetricGraph.build(ids, es, genus, infinite)


def serialize_graph(m: MetricGraph):
    return {
        "vertices": [{"id": v, "genus": m.genus.get(v, 0), "infinite": v in m.infinite}
                     for v in m.vertices],
        "edges": [{"id": e.id, "ends": list(e.ends), "length": fmt_q(e.length)}
                  for e in m.edges.values()],
    }


def parse_morphism(data, source: MetricGraph, target: MetricGraph, path=""):
    _need(data, dict, path)
    vmap = _need(data.get("vertex_map"), dict, path + "/vertex_map")
    for v, x in vmap.items():
        p = path + _ptr("vertex_map", v)
        if v not in source.vertices:
            raise ParseError(f"unknown source vertex {v!r}", p)
        if not isinstance(x, str) or x not in target.vertices:
            raise ParseError(f"unknown target vertex {x!r}", p)
    emap_in = _need(data.get("edge_map", {}), dict, path + "/edge_map")
    emap = {}
    for e, img in emap_in.items():
        p = path + _ptr("edge_map", e)
        if e not in source.edges:
            raise ParseError(f"unknown source edge {e!r}", p)
        _need(img, dict, p)
        if "edge" in img:
            if img["edge"] not in target.edges:
                raise ParseError(f"unknown target edge {img['edge']!r}", p + "/edge")
            emap[e] = img["edge"]
        elif "contracted_to" in img:
            if img["contracted_to"] not in target.vertices:
                raise ParseError(f"unknown target vertex {img['contracted_to']!r}",
                                 p + "/contracted_to")
            emap[e] = Contracted(img["contracted_to"])
        else:
            raise ParseError("expected {'edge': id} or {'contracted_to': id}", p)
    degs = None
    if "edge_degree" in data:
        degs = {}
        for e, k in _need(data["edge_degree"], dict, path + "/edge_degree").items():
            p = path + _ptr("edge_degree", e)
            if e not in source.edges:
                raise ParseError(f"unknown source edge {e!r}", p)
            degs[e] = _int(k, p, 0)
    pdeg = None
    if "point_target_degrees" in data:
        pdeg = {}
        for v, k in _need(data["point_target_degrees"], dict,
                          path + "/point_target_degrees").items():
            p = path + _ptr("point_target_degrees", v)
            if v not in source.vertices:
                raise ParseError(f"unknown source vertex {v!r}", p)
            pdeg[v] = _int(k, p, 1)
    phi = Morphism(source, target, vmap, emap, degs, pdeg)
    diag = validate_morphism(phi)
    if diag:
        raise ValidationError("; ".join(diag), diag)
    return phi


def serialize_morphism(phi: Morphism):
    em = {}
    for e, img in phi.edge_map.items():
        em[e] = {"contracted_to": img.vertex} if isinstance(img, Contracted) else {"edge": img}
    out = {"vertex_map": dict(phi.vertex_map), "edge_map": em,
           "edge_degree": dict(phi.edge_degree)}
    if phi.point_degrees:
        out["point_target_degrees"] = dict(phi.point_degrees)
    return out


def parse_bundle(data, path=""):
    """{"source": graph, "target": graph, "morphism": morphism}."""
    _need(data, dict, path)
    for k in ("source", "target", "morphism"):
        if k not in data:
            raise ParseError(f"missing key {k!r}", path + "/" + k)
    S = parse_graph(data["source"], path + "/source")
    T = parse_graph(data["target"], path + "/target")
    return parse_morphism(data["morphism"], S, T, path + "/morphism")


def serialize_bundle(phi: Morphism):
    return {"source": serialize_graph(phi.source), "target": serialize_graph(phi.target),
            "morphism": serialize_morphism(phi)}


def parse_divisor(data, m: MetricGraph, path=""):
    _need(data, list, path)
    out = {}
    for i, item in enumerate(data):
        p = f"{path}/{i}"
        _need(item, dict, p)
        at = _need(item.get("at"), dict, p + "/at")
        coeff = _int(item.get("coeff"), p + "/coeff")
        if "vertex" in at:
            if at["vertex"] not in m.vertices:
                raise ParseError(f"unknown vertex id {at['vertex']!r}", p + "/at/vertex")
            pt = Point.at(at["vertex"])
        elif "edge" in at:
            if at["edge"] not in m.edges:
                raise ParseError(f"unknown edge id {at['edge']!r}", p + "/at/edge")
            off = parse_rational(at.get("offset"), p + "/at/offset")
            ln = m.edges[at["edge"]].length
            if off < 0 or (ln != INF and off > ln):
                raise ParseError(f"offset {fmt_q(off)} outside the edge", p + "/at/offset")
            pt = Point.on(at["edge"], off)
        else:
            raise ParseError("expected {'vertex': id} or {'edge': id, 'offset': q}", p + "/at")
        out[pt] = out.get(pt, 0) + coeff
    return Divisor(out)


def serialize_divisor(D: Divisor):
    out = []
    for p, c in D.items():
        at = {"vertex": p.vertex} if p.is_vertex else {"edge": p.edge, "offset": fmt_q(p.offset)}
        out.append({"at": at, "coeff": c})
    return out


def dumps(obj):
    """Deterministic JSON text."""
    return json.dumps(obj, sort_keys=True, indent=2, default=_default) + "\n"


def _default(x):
    if isinstance(x, Fraction):
        return fmt_q(x)
    if isinstance(x, (set, frozenset, tuple)):
        return sorted(x) if isinstance(x, (set, frozenset)) else list(x)
    raise TypeError(f"cannot serialize {type(x).__name__}")


def load_json(text, path=""):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg} at line {exc.lineno}", path) from None


def _q(s):
    return '"' + str(s).replace('"', '\\"') + '"'


def graph_to_dot(m: MetricGraph, name="G"):
    lines = [f"graph {name} {{"]
    for v in m.vertices:
        label = v if not m.genus.get(v) else f"{v} [g={m.genus[v]}]"
        shape = ' shape="point"' if v in m.infinite else ""
        lines.append(f"  {_q(v)} [label={_q(label)}{shape}];")
    for e in m.edges.values():
        lines.append(f"  {_q(e.ends[0])} -- {_q(e.ends[1])} "
                     f"[label={_q(e.id + ': ℓ=' + fmt_q(e.length))}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def morphism_to_dot(phi: Morphism):
    """Source graph with each edge labelled by its length and degree."""
    S = phi.source
    lines = ["graph phi {"]
    for v in S.vertices:
        lines.append(f"  {_q(v)} [label={_q(v + ' → ' + phi.vertex_map[v])}];")
    for e in S.edges.values():
        lab = f"ℓ={fmt_q(e.length)}, d={phi.edge_degree[e.id]}"
        lines.append(f"  {_q(e.ends[0])} -- {_q(e.ends[1])} [label={_q(lab)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
