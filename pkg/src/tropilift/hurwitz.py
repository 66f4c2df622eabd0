"""Hurwitz numbers by enumeration of monodromy tuples in S_d.

A tuple is (a_1, b_1, ..., a_g, b_g, s_1, ..., s_s, t_1, ..., t_R) with
cycle_type(s_i) = mu_i, each t_j a transposition,
[a_1,b_1]...[a_g,b_g] s_1...s_s t_1...t_R = id, and the generated group
transitive.  The Hurwitz number is (number of tuples) / d!.

Two counting methods are provided: ``brute`` walks every tuple explicitly,
``dp`` aggregates partial products together with the orbit partition they
generate.  They must agree; the test suite checks this for d <= 4.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import permutations, product
from math import factorial, gcd

from .errors import RefusedComputation, ValidationError


def partition(p):
    """Normalize "2,2" / [2, 2] / (2, 2) to a descending tuple."""
    if isinstance(p, str):
        p = [int(x) for x in p.replace(" ", "").split(",") if x]
    p = tuple(sorted((int(x) for x in p), reverse=True))
    if any(x < 1 for x in p):
        raise ValidationError(f"partition entries must be positive: {p}")
    return p


@dataclass(frozen=True)
class HurwitzQuery:
    g_source: int
    g_target: int
    d: int
    mus: tuple = field(default_factory=tuple)
    char_p: int = 0

    def __post_init__(self):
        object.__setattr__(self, "mus", tuple(partition(m) for m in self.mus))
        if self.d < 1:
            raise ValidationError("degree must be at least 1")
        if self.g_source < 0 or self.g_target < 0 or self.char_p < 0:
            raise ValidationError("genera and characteristic must be nonnegative")
        for m in self.mus:
            if sum(m) != self.d:
                raise ValidationError(f"partition {m} does not sum to {self.d}")


def expected_R(q: HurwitzQuery):
    d, s = q.d, len(q.mus)
    return d * (2 - 2 * q.g_target) + 2 * q.g_source - 2 - s * d + sum(len(m) for m in q.mus)


def is_tame_query(q: HurwitzQuery):
    p = q.char_p
    if p == 0 or p > q.d:
        return True
    return all(gcd(x, p) == 1 for m in q.mus for x in m)


# -- permutations ---------------------------------------------------------

def compose(p, q):
    """(p*q)(i) = p(q(i))."""
    return tuple(p[i] for i in q)


def inverse(p):
    out = [0] * len(p)
    for i, x in enumerate(p):
        out[x] = i
    return tuple(out)


def cycle_type(p):
    seen = [False] * len(p)
    out = []
    for i in range(len(p)):
        if not seen[i]:
            n, j = 0, i
            while not seen[j]:
                seen[j] = True
                j = p[j]
                n += 1
            out.append(n)
    return tuple(sorted(out, reverse=True))


@lru_cache(maxsize=None)
def conjugacy_class(d, mu):
    return tuple(p for p in permutations(range(d)) if cycle_type(p) == mu)


@lru_cache(maxsize=None)
def symmetric_group(d):
    return tuple(permutations(range(d)))


def _transposition_type(d):
    return (2,) + (1,) * (d - 2) if d >= 2 else None


def is_transitive(perms, d):
    parent = list(range(d))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for p in perms:
        for i, j in enumerate(p):
            a, b = find(i), find(j)
            if a != b:
                parent[a] = b
    return len({find(i) for i in range(d)}) == 1


# -- counting -------------------------------------------------------------

def _factor_classes(q: HurwitzQuery, R):
    classes = [conjugacy_class(q.d, m) for m in q.mus]
    t = _transposition_type(q.d)
    classes += [conjugacy_class(q.d, t) if t else ()] * R
    return classes


def count_brute(q: HurwitzQuery, transitive=True):
    """Explicit walk over tuples; the last factor is solved for."""
    d = q.d
    R = expected_R(q)
    ident = tuple(range(d))
    classes = _factor_classes(q, R)
    G = symmetric_group(d)
    comm = []
    for a, b in product(G, repeat=2):
        comm.append((compose(compose(a, b), compose(inverse(a), inverse(b))), (a, b)))
    count = 0
    pools = [comm] * q.g_target + [[(x, (x,)) for x in c] for c in classes]
    if not pools:
        return 1 if d == 1 or not transitive else 0
    last = pools[-1]
    last_lookup = defaultdict(list)
    for x, gens in last:
        last_lookup[x].append(gens)
    for choice in product(*pools[:-1]):
        prod_ = ident
        gens = []
        for x, gs in choice:
            prod_ = compose(prod_, x)
            gens.extend(gs)
        need = inverse(prod_)
        for gs in last_lookup.get(need, ()):
            if not transitive or is_transitive(gens + list(gs), d):
                count += 1
    return count


def _orbit_key(labels):
    # relabel blocks by first occurrence
    m, out = {}, []
    for x in labels:
        out.append(m.setdefault(x, len(m)))
    return tuple(out)


@lru_cache(maxsize=None)
def _merge(a, b):
    """Finest common coarsening of two orbit partitions given as label tuples."""
    lab = list(a)
    for i, x in enumerate(b):
        j = b.index(x)
        if lab[i] != lab[j]:
            old, keep = lab[i], lab[j]
            lab = [keep if y == old else y for y in lab]
    return _orbit_key(lab)


def _orbits_of(perms, d):
    lab = tuple(range(d))
    for p in perms:
        lab = _merge(lab, _orbit_key(_cycle_labels(p)))
    return lab


def _cycle_labels(p):
    lab = [-1] * len(p)
    for i in range(len(p)):
        j = i
        while lab[j] < 0:
            lab[j] = i
            j = p[j]
    return lab


def count_dp(q: HurwitzQuery, transitive=True):
    """Aggregate over (partial product, orbit partition) states."""
    d = q.d
    R = expected_R(q)
    ident = tuple(range(d))
    trivial = ident if transitive else ()
    steps = []
    if q.g_target:
        cm = defaultdict(int)
        for a, b in product(symmetric_group(d), repeat=2):
            c = compose(compose(a, b), compose(inverse(a), inverse(b)))
            cm[(c, _orbits_of((a, b), d) if transitive else ())] += 1
        steps += [list(cm.items())] * q.g_target
    for cls in _factor_classes(q, R):
        steps.append([((x, _orbits_of((x,), d) if transitive else ()), 1) for x in cls])
    states = {(ident, trivial): 1}
    for step in steps:
        new = defaultdict(int)
        for (p, orb), n in states.items():
            for (x, xorb), m in step:
                merged = _merge(orb, xorb) if transitive else ()
                new[(compose(p, x), merged)] += n * m
        states = new
    return states.get((ident, (0,) * d if transitive else ()), 0)


def hurwitz_count(q: HurwitzQuery, method="auto", transitive=True):
    """Number of admissible monodromy tuples (after the tameness and R gates)."""
    _gate(q)
    if method == "brute":
        return count_brute(q, transitive)
    if method in ("dp", "auto"):
        return count_dp(q, transitive)
    raise ValueError(f"unknown method {method!r}")


def _gate(q: HurwitzQuery):
    if expected_R(q) < 0:
        raise RefusedComputation(f"negative ramification R={expected_R(q)}")
    if q.char_p and not is_tame_query(q):
        raise RefusedComputation(f"wild query in characteristic {q.char_p}")
    if q.char_p and q.char_p <= q.d:
        raise RefusedComputation(
            f"characteristic {q.char_p} <= degree {q.d}: the characteristic-0 count "
            "is not known to apply")


def hurwitz_number(q: HurwitzQuery, method="auto", transitive=True):
    return Fraction(hurwitz_count(q, method, transitive), factorial(q.d))


def a_set_nonempty(q: HurwitzQuery, method="auto"):
    return hurwitz_number(q, method) != 0


def min_source_genus(g, d, mus, g_max, char_p=0):
    """Least g' in [0, g_max] with R >= 0 and a nonempty set; None otherwise."""
    for gs in range(g_max + 1):
        q = HurwitzQuery(gs, g, d, tuple(mus), char_p)
        if expected_R(q) < 0:
            continue
        if a_set_nonempty(q):
            return gs
    return None


def no_degree4_profile_221_31():
    """No degree-4 map P^1 -> P^1 has profile (2,2), (2,2), (3,1)."""
    return not a_set_nonempty(HurwitzQuery(0, 0, 4, ((2, 2), (2, 2), (3, 1))))
