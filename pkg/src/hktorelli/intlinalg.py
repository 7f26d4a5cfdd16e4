"""Integer matrix normal forms: Hermite (row style), Smith with transforms, kernels.

Matrices are lists of lists of Python ints, so nothing ever overflows.
"""

from __future__ import annotations

from typing import Sequence

Matrix = list[list[int]]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> Matrix:
    if not a:
        return []
    bt = list(zip(*b)) if b else []
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def transpose(a: Sequence[Sequence[int]]) -> Matrix:
    return [list(r) for r in zip(*a)]


def _euclid_column(rows: Matrix, col: int, start: int, width: int | None = None) -> bool:
    """Unimodular row operations on rows[start:] leaving at most one nonzero in ``col``.

    The surviving nonzero (if any) is moved to ``rows[start]``.  Returns whether
    a pivot exists.  Operations act on entire rows.
    """
    while True:
        nz = [i for i in range(start, len(rows)) if rows[i][col] != 0]
        if not nz:
            return False
        piv = min(nz, key=lambda i: abs(rows[i][col]))
        rows[start], rows[piv] = rows[piv], rows[start]
        p_row = rows[start]
        p = p_row[col]
        clean = True
        for i in range(start + 1, len(rows)):
            x = rows[i][col]
            if x:
                q = x // p
                if q:
                    rows[i] = [u - q * v for u, v in zip(rows[i], p_row)]
                if rows[i][col]:
                    clean = False
        if clean:
            return True


def hnf(rows: Sequence[Sequence[int]]) -> Matrix:
    """Row Hermite normal form of the row lattice; zero rows dropped.

    Pivots are positive and strictly increasing in column; entries above a
    pivot lie in [0, pivot).  Equal row lattices give identical output.
    """
    a = [list(map(int, r)) for r in rows if any(r)]
    if not a:
        return []
    ncols = len(a[0])
    r = 0
    for col in range(ncols):
        if r == len(a):
            break
        if not _euclid_column(a, col, r):
            continue
        if a[r][col] < 0:
            a[r] = [-x for x in a[r]]
        p = a[r][col]
        for i in range(r):
            q = a[i][col] // p
            if q:
                a[i] = [u - q * v for u, v in zip(a[i], a[r])]
        r += 1
    return a[:r]


def integer_kernel(a: Sequence[Sequence[int]], ncols: int | None = None) -> Matrix:
    """Z-basis (in HNF) of {x in Z^n : a x = 0}."""
    m = len(a)
    n = ncols if ncols is not None else (len(a[0]) if a else 0)
    if m == 0:
        return identity(n)
    # [a^T | I] and reduce the left block; rows with zero left block span the kernel
    work = [[int(a[i][j]) for i in range(m)] + [int(j == k) for k in range(n)] for j in range(n)]
    r = 0
    for col in range(m):
        if r == n:
            break
        if _euclid_column(work, col, r):
            r += 1
    kernel = [row[m:] for row in work[r:]]
    return hnf(kernel)


def rank(a: Sequence[Sequence[int]]) -> int:
    return len(hnf(a))


def smith_normal_form(a: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix, Matrix]:
    """Return (U, D, V) with U a V = D, U and V unimodular, D in Smith form."""
    m = len(a)
    n = len(a[0]) if m else 0
    d = [list(map(int, r)) for r in a]
    u = identity(m)
    v = identity(n)

    def swap_rows(i, j):
        d[i], d[j] = d[j], d[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in d:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row_dst -= q * row_src
        d[dst] = [x - q * y for x, y in zip(d[dst], d[src])]
        u[dst] = [x - q * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, q):  # col_dst -= q * col_src
        for row in d:
            row[dst] -= q * row[src]
        for row in v:
            row[dst] -= q * row[src]

    for t in range(min(m, n)):
        while True:
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    x = d[i][j]
                    if x and (best is None or abs(x) < best[0]):
                        best = (abs(x), i, j)
            if best is None:
                return u, d, v
            _, i0, j0 = best
            if i0 != t:
                swap_rows(t, i0)
            if j0 != t:
                swap_cols(t, j0)
            p = d[t][t]
            done = True
            for i in range(t + 1, m):
                if d[i][t]:
                    add_row(i, t, d[i][t] // p)
                    if d[i][t]:
                        done = False
            for j in range(t + 1, n):
                if d[t][j]:
                    add_col(j, t, d[t][j] // p)
                    if d[t][j]:
                        done = False
            if not done:
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if d[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, -1)
        if d[t][t] < 0:
            d[t] = [-x for x in d[t]]
            u[t] = [-x for x in u[t]]
    return u, d, v


def is_unimodular_det(a: Sequence[Sequence[int]]) -> bool:
    """|det a| == 1, decided by the Smith form."""
    if len(a) != (len(a[0]) if a else 0):
        return False
    _, d, _ = smith_normal_form(a)
    return all(d[i][i] == 1 for i in range(len(a)))


def det(a: Sequence[Sequence[int]]) -> int:
    """Exact integer determinant (Bareiss)."""
    m = [list(map(int, r)) for r in a]
    n = len(m)
    if n == 0:
        return 1
    sgn = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            sw = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if sw is None:
                return 0
            m[k], m[sw] = m[sw], m[k]
            sgn = -sgn
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sgn * m[n - 1][n - 1]
