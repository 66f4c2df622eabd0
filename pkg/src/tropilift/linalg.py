"""Exact integer and rational linear algebra on lists of lists.

Everything here works on plain Python ints / Fractions so results are exact.
"""
from fractions import Fraction
from math import gcd


def identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(a, b):
    if not a:
        return []
    cols = len(b[0]) if b else 0
    return [[sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(cols)]
            for i in range(len(a))]


def transpose(a, ncols=None):
    if not a:
        return [[] for _ in range(ncols or 0)]
    return [list(r) for r in zip(*a)]


def smith_normal_form(a):
    """Return (S, U, V) with U*A*V = S diagonal, U and V unimodular.

    The diagonal entries are nonnegative and each divides the next.
    """
    m = len(a)
    n = len(a[0]) if m else 0
    s = [list(map(int, row)) for row in a]
    u = identity(m)
    v = identity(n)

    def swap_rows(i, j):
        s[i], s[j] = s[j], s[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in s:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, k):  # row_dst += k * row_src
        if k:
            s[dst] = [x + k * y for x, y in zip(s[dst], s[src])]
            u[dst] = [x + k * y for x, y in zip(u[dst], u[src])]

    def add_col(src, dst, k):
        if k:
            for row in s:
                row[dst] += k * row[src]
            for row in v:
                row[dst] += k * row[src]

    t = 0
    while t < min(m, n):
        # pivot: smallest nonzero |entry| in the trailing block
        cand = [(abs(s[i][j]), i, j) for i in range(t, m) for j in range(t, n) if s[i][j]]
        if not cand:
            break
        _, i0, j0 = min(cand)
        swap_rows(t, i0)
        swap_cols(t, j0)
        while True:
            p = s[t][t]
            for i in range(t + 1, m):
                add_row(t, i, -(s[i][t] // p))
            for j in range(t + 1, n):
                add_col(t, j, -(s[t][j] // p))
            rest = [(abs(s[i][t]), i, None) for i in range(t + 1, m) if s[i][t]]
            rest += [(abs(s[t][j]), None, j) for j in range(t + 1, n) if s[t][j]]
            if rest:
                # a remainder smaller than the pivot survived; make it the pivot
                _, i1, j1 = min(rest, key=lambda r: r[0])
                if i1 is not None:
                    swap_rows(t, i1)
                else:
                    swap_cols(t, j1)
                continue
            bad = next((i for i in range(t + 1, m)
                        if any(s[i][j] % p for j in range(t + 1, n))), None)
            if bad is None:
                break
            add_row(bad, t, 1)
        if s[t][t] < 0:
            s[t] = [-x for x in s[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    return s, u, v


def invariant_factors(a):
    """Diagonal of the Smith form (zeros included, length min(m, n))."""
    s, _, _ = smith_normal_form(a)
    return [s[i][i] for i in range(min(len(s), len(s[0]) if s else 0))]


def det_bareiss(a):
    """Exact integer determinant by fraction-free elimination."""
    n = len(a)
    if n == 0:
        return 1
    m = [list(map(int, r)) for r in a]
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def solve_rational(a, b):
    """Solve A x = b over Q for square nonsingular A."""
    n = len(a)
    m = [[Fraction(x) for x in row] + [Fraction(y)] for row, y in zip(a, b)]
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c]), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        m[c], m[piv] = m[piv], m[c]
        inv = 1 / m[c][c]
        m[c] = [x * inv for x in m[c]]
        for r in range(n):
            if r != c and m[r][c]:
                f = m[r][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return [m[r][n] for r in range(n)]


def integer_nullspace(a, ncols):
    """A Z-basis (as rows) of {x in Z^ncols : A x = 0}."""
    if not a:
        return identity(ncols)
    s, _, v = smith_normal_form(a)
    rank = sum(1 for i in range(min(len(s), ncols)) if s[i][i])
    return [[v[r][j] for r in range(ncols)] for j in range(rank, ncols)]


def lcm(a, b):
    return a * b // gcd(a, b) if a and b else 0
