"""Exact integer matrix canonical forms.

Everything here works on lists of lists of Python ints, so entries grow
without overflow.  `smith_normal_form` returns the full (D, U, V) with
U A V = D, U and V unimodular, and the diagonal divisibility chain
d1 | d2 | ...; `row_echelon` is a Hermite-style row reduction with the
transform matrix kept alongside, used for lattice membership and
coordinate solving.

Clearing steps use extended-gcd 2x2 updates (det +1) rather than repeated
remainder swaps; that keeps intermediate entries polynomially bounded,
which matters already for random 6x6 inputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd


Matrix = list[list[int]]


def identity_matrix(n: int) -> Matrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    if not a or not b:
        return []
    cols = len(b[0])
    inner = len(b)
    return [
        [sum(row[k] * b[k][j] for k in range(inner)) for j in range(cols)]
        for row in a
    ]


def mat_copy(a) -> Matrix:
    return [list(row) for row in a]


def _ext_gcd(p: int, q: int) -> tuple[int, int, int]:
    """(g, x, y) with x p + y q = g > 0."""
    old_r, r = p, q
    old_x, x = 1, 0
    old_y, y = 0, 1
    while r:
        quo = old_r // r
        old_r, r = r, old_r - quo * r
        old_x, x = x, old_x - quo * x
        old_y, y = y, old_y - quo * y
    if old_r < 0:
        old_r, old_x, old_y = -old_r, -old_x, -old_y
    return old_r, old_x, old_y


def bareiss_det(matrix) -> int:
    """Fraction-free Gaussian elimination; exact integer determinant."""
    a = mat_copy(matrix)
    n = len(a)
    if n == 0:
        return 1
    if any(len(row) != n for row in a):
        raise ValueError("determinant requires a square matrix")
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


@dataclass(frozen=True)
class SmithForm:
    diagonal: tuple[int, ...]          # length min(m, n), divisibility chain
    u: tuple[tuple[int, ...], ...]     # m x m, |det| = 1
    v: tuple[tuple[int, ...], ...]     # n x n, |det| = 1
    rows: int
    cols: int

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)

    def d_matrix(self) -> Matrix:
        out = [[0] * self.cols for _ in range(self.rows)]
        for i, d in enumerate(self.diagonal):
            out[i][i] = d
        return out


def smith_normal_form(matrix) -> SmithForm:
    a = mat_copy(matrix)
    m = len(a)
    n = len(a[0]) if m else 0
    if any(len(row) != n for row in a):
        raise ValueError("ragged matrix")
    u = identity_matrix(m)
    v = identity_matrix(n)

    def row_clear(t: int, i: int) -> None:
        """Zero a[i][t] against the pivot row t (unimodular)."""
        p, q = a[t][t], a[i][t]
        if q == 0:
            return
        if p != 0 and q % p == 0:
            f = q // p
            a[i] = [x - f * y for x, y in zip(a[i], a[t])]
            u[i] = [x - f * y for x, y in zip(u[i], u[t])]
            return
        g, x, y = _ext_gcd(p, q)
        pg, qg = p // g, q // g
        at, ai = a[t], a[i]
        a[t] = [x * r + y * s for r, s in zip(at, ai)]
        a[i] = [-qg * r + pg * s for r, s in zip(at, ai)]
        ut, ui = u[t], u[i]
        u[t] = [x * r + y * s for r, s in zip(ut, ui)]
        u[i] = [-qg * r + pg * s for r, s in zip(ut, ui)]

    def col_clear(t: int, j: int) -> None:
        """Zero a[t][j] against the pivot column t (unimodular)."""
        p, q = a[t][t], a[t][j]
        if q == 0:
            return
        if p != 0 and q % p == 0:
            f = q // p
            for row in a:
                row[j] -= f * row[t]
            for row in v:
                row[j] -= f * row[t]
            return
        g, x, y = _ext_gcd(p, q)
        pg, qg = p // g, q // g
        for row in a:
            ct, cj = row[t], row[j]
            row[t] = x * ct + y * cj
            row[j] = -qg * ct + pg * cj
        for row in v:
            ct, cj = row[t], row[j]
            row[t] = x * ct + y * cj
            row[j] = -qg * ct + pg * cj

    def reduce_at(t: int) -> None:
        """Make (t, t) the only nonzero of its row and column."""
        while True:
            for i in range(m):
                if i != t:
                    row_clear(t, i)
            row_dirty = False
            for j in range(n):
                if j != t and a[t][j] != 0:
                    col_clear(t, j)
                    row_dirty = True
            if not row_dirty and all(a[i][t] == 0 for i in range(m) if i != t):
                return

    limit = min(m, n)
    t = 0
    while t < limit:
        pivot = None
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if a[i][j] != 0 and (best is None or abs(a[i][j]) < best):
                    best = abs(a[i][j])
                    pivot = (i, j)
        if pivot is None:
            break
        if pivot[0] != t:
            a[t], a[pivot[0]] = a[pivot[0]], a[t]
            u[t], u[pivot[0]] = u[pivot[0]], u[t]
        if pivot[1] != t:
            for row in a:
                row[t], row[pivot[1]] = row[pivot[1]], row[t]
            for row in v:
                row[t], row[pivot[1]] = row[pivot[1]], row[t]
        reduce_at(t)
        t += 1

    for t in range(limit):
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]

    # enforce d_t | d_{t+1}: fold the offender's row in and re-reduce
    t = 0
    while t + 1 < limit:
        dt, dn = a[t][t], a[t + 1][t + 1]
        if dt != 0 and dn % dt != 0:
            a[t] = [x + y for x, y in zip(a[t], a[t + 1])]
            u[t] = [x + y for x, y in zip(u[t], u[t + 1])]
            reduce_at(t)
            for k in (t, t + 1):
                if a[k][k] < 0:
                    a[k] = [-x for x in a[k]]
                    u[k] = [-x for x in u[k]]
            t = max(t - 1, 0)
        else:
            t += 1

    diag = tuple(a[i][i] for i in range(limit))
    return SmithForm(
        diagonal=diag,
        u=tuple(tuple(row) for row in u),
        v=tuple(tuple(row) for row in v),
        rows=m,
        cols=n,
    )


@dataclass(frozen=True)
class RowEchelon:
    reduced: tuple[tuple[int, ...], ...]   # T @ original
    transform: tuple[tuple[int, ...], ...]
    pivots: tuple[tuple[int, int], ...]    # (row, col) of each pivot

    @property
    def rank(self) -> int:
        return len(self.pivots)


def row_echelon(matrix) -> RowEchelon:
    """Integer row echelon form with positive pivots and rows above each
    pivot reduced modulo it; the unimodular transform is returned."""
    a = mat_copy(matrix)
    m = len(a)
    n = len(a[0]) if m else 0
    t = identity_matrix(m)

    def combine(r: int, i: int, j: int) -> None:
        """Unimodular 2x2 update making a[i][j] = 0, gcd at a[r][j]."""
        p, q = a[r][j], a[i][j]
        if q == 0:
            return
        if p != 0 and q % p == 0:
            f = q // p
            a[i] = [x - f * y for x, y in zip(a[i], a[r])]
            t[i] = [x - f * y for x, y in zip(t[i], t[r])]
            return
        g, x, y = _ext_gcd(p, q)
        pg, qg = p // g, q // g
        ar, ai = a[r], a[i]
        a[r] = [x * s + y * w for s, w in zip(ar, ai)]
        a[i] = [-qg * s + pg * w for s, w in zip(ar, ai)]
        tr, ti = t[r], t[i]
        t[r] = [x * s + y * w for s, w in zip(tr, ti)]
        t[i] = [-qg * s + pg * w for s, w in zip(tr, ti)]

    pivots: list[tuple[int, int]] = []
    r = 0
    for j in range(n):
        if r == m:
            break
        for i in range(r + 1, m):
            combine(r, i, j)
        if a[r][j] == 0:
            continue
        if a[r][j] < 0:
            a[r] = [-x for x in a[r]]
            t[r] = [-x for x in t[r]]
        for i in range(r):
            f = a[i][j] // a[r][j]
            if f:
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
                t[i] = [x - f * y for x, y in zip(t[i], t[r])]
        pivots.append((r, j))
        r += 1
    return RowEchelon(
        reduced=tuple(tuple(row) for row in a),
        transform=tuple(tuple(row) for row in t),
        pivots=tuple(pivots),
    )


def solve_integer_combination(ech: RowEchelon, vector) -> list[int] | None:
    """Coefficients c with c @ original = vector, or None if the vector is
    not in the integer row span."""
    v = list(vector)
    m = len(ech.transform)
    coeffs = [0] * m
    for r, j in ech.pivots:
        piv = ech.reduced[r][j]
        if v[j] % piv != 0:
            return None
        q = v[j] // piv
        coeffs[r] = q
        if q:
            v = [x - q * y for x, y in zip(v, ech.reduced[r])]
    if any(v):
        return None
    # back through the transform: the reduced rows are T @ B
    return [
        sum(coeffs[r] * ech.transform[r][i] for r in range(m))
        for i in range(m)
    ]
