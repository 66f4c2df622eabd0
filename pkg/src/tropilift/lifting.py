"""Vertex-by-vertex liftability of augmented harmonic morphisms.

At a finite source vertex p' the local data is (d_p', g(p'), g(phi(p')))
and one partition of d_p' per tangent direction at phi(p').  A lift exists
iff, at every such vertex, some cover of curves with that data exists,
which in characteristic 0 is the nonvanishing of a Hurwitz number.
Interior edge points carry the data ((d), (d)) in genus 0, realized by
z -> z^d, so only vertices are checked.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import RefusedComputation, ValidationError
from .harmonic import (Morphism, degree, is_effective, is_finite, is_generically_etale,
                       is_tame, local_partitions, ramification)
from .hurwitz import HurwitzQuery, a_set_nonempty, expected_R, hurwitz_number


@dataclass
class VertexLiftReport:
    vertex: str
    degree: int
    g_source: int
    g_target: int
    partitions: list
    R: int
    verdict: str                      # liftable | obstructed | wild
    hurwitz: Fraction | None = None   # None when short-circuited or refused
    reason: str = ""

    def as_dict(self):
        return {
            "vertex": self.vertex, "degree": self.degree,
            "g_source": self.g_source, "g_target": self.g_target,
            "partitions": [list(p) for p in self.partitions], "R": self.R,
            "verdict": self.verdict,
            "hurwitz": None if self.hurwitz is None else str(self.hurwitz),
            "reason": self.reason,
        }


def _shortcut(d, gs, gt, parts, char_p):
    """Cases decided without enumeration; returns a reason string or None."""
    if d == 1:
        return "degree 1: isomorphism" if gs == gt else None
    if all(set(p) <= {1} for p in parts) and gs >= 0:
        R = expected_R(HurwitzQuery(gs, gt, d, tuple(parts)))
        if R >= 0:
            return "all partitions trivial"
    if (gs, gt) == (0, 0) and sorted(parts) == [(d,), (d,)] and (char_p == 0 or d % char_p):
        return "z -> z^d"
    return None


def vertex_report(phi: Morphism, v, gs, gt, char_p=0, method="auto"):
    d = phi.local_degree(v)
    x = phi.vertex_map[v]
    parts = local_partitions(phi, v)
    gsv, gtx = gs.get(v, 0), gt.get(x, 0)
    q = HurwitzQuery(gsv, gtx, d, tuple(parts), char_p)
    R = expected_R(q)
    if d == 1 and gsv != gtx:
        return VertexLiftReport(v, d, gsv, gtx, parts, R, "obstructed", Fraction(0),
                                "degree 1 needs equal genera")
    why = _shortcut(d, gsv, gtx, parts, char_p)
    if why:
        return VertexLiftReport(v, d, gsv, gtx, parts, R, "liftable", None, why)
    try:
        h = hurwitz_number(q, method)
    except RefusedComputation as exc:
        return VertexLiftReport(v, d, gsv, gtx, parts, R, "wild", None, str(exc))
    verdict = "liftable" if h else "obstructed"
    return VertexLiftReport(v, d, gsv, gtx, parts, R, verdict, h,
                            "Hurwitz number " + ("nonzero" if h else "vanishes"))


def _preflight(phi, gs, gt, char_p):
    if not is_finite(phi):
        raise ValidationError("morphism is not finite")
    degree(phi)  # raises unless harmonic and surjective
    if not is_tame(phi, char_p):
        raise RefusedComputation(f"morphism is not tame in characteristic {char_p}")
    if not is_effective(phi, gs, gt):
        _, r = ramification(phi, gs, gt)
        bad = {v: x for v, x in r.items() if x < 0 and v not in phi.source.infinite}
        raise ValidationError(f"morphism is not effective: r = {bad}")


def liftable_augmented(phi: Morphism, g_source=None, g_target=None, char_p=0, method="auto"):
    """Return (liftable?, [VertexLiftReport]) over finite source vertices."""
    gs = phi.source.genus if g_source is None else g_source
    gt = phi.target.genus if g_target is None else g_target
    _preflight(phi, gs, gt, char_p)
    reports = [vertex_report(phi, v, gs, gt, char_p, method)
               for v in phi.source.vertices if v not in phi.source.infinite]
    return all(r.verdict == "liftable" for r in reports), reports


def genus_relaxed_lift(phi: Morphism, g_target=None, g_max=3, char_p=0):
    """Smallest source genus per vertex making every local set nonempty, or None."""
    gt = phi.target.genus if g_target is None else g_target
    if not is_finite(phi):
        raise ValidationError("morphism is not finite")
    degree(phi)
    if not is_tame(phi, char_p):
        raise RefusedComputation(f"morphism is not tame in characteristic {char_p}")
    out = {}
    for v in phi.source.vertices:
        if v in phi.source.infinite:
            out[v] = 0
            continue
        d = phi.local_degree(v)
        parts = local_partitions(phi, v)
        gx = gt.get(phi.vertex_map[v], 0)
        best = None
        for gsv in range(g_max + 1):
            q = HurwitzQuery(gsv, gx, d, tuple(parts), char_p)
            if expected_R(q) < 0:
                continue
            if _shortcut(d, gsv, gx, parts, char_p) or a_set_nonempty(q):
                best = gsv
                break
        if best is None:
            return None
        out[v] = best
    return out


def check_tame_covering_shadow(phi: Morphism, g_source=None, g_target=None, char_p=0):
    """Generically etale and tame: the shape of input that lifts as a tame covering."""
    if not is_finite(phi):
        return False
    return is_generically_etale(phi, g_source, g_target) and is_tame(phi, char_p)
