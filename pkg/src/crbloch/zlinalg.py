"""Small exact integer linear algebra: row HNF with transformation and
membership/solve against the row lattice.  Matrices are lists of lists
of Python ints; sizes here are tiny (dozens of rows at most)."""

from __future__ import annotations


def hnf_with_transform(rows: list[list[int]]) -> tuple[list[list[int]], list[list[int]]]:
    """Row-style Hermite normal form.

    Returns (H, U) with H = U * A (U unimodular over Z), H in row echelon
    form with positive pivots and reduced entries above each pivot; zero
    rows of H are trimmed along with their U rows.
    """
    m = len(rows)
    n = len(rows[0]) if m else 0
    a = [list(r) for r in rows]
    u = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    r = 0
    for c in range(n):
        piv = None
        for i in range(r, m):
            if a[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        u[r], u[piv] = u[piv], u[r]
        # clear below by gcd steps
        for i in range(r + 1, m):
            while a[i][c] != 0:
                q = a[r][c] // a[i][c]
                a[r] = [x - q * y for x, y in zip(a[r], a[i])]
                u[r] = [x - q * y for x, y in zip(u[r], u[i])]
                a[r], a[i] = a[i], a[r]
                u[r], u[i] = u[i], u[r]
        if a[r][c] < 0:
            a[r] = [-x for x in a[r]]
            u[r] = [-x for x in u[r]]
        if a[r][c] != 0:
            # reduce entries above the pivot
            for i in range(r):
                q = a[i][c] // a[r][c]
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[r])]
                    u[i] = [x - q * y for x, y in zip(u[i], u[r])]
            r += 1
    return a[:r], u[:r]


def solve_in_row_lattice(rows: list[list[int]], target: list[int]):
    """Integer coefficients x with x * rows = target, or None.

    Works through the HNF: if H = U A and target = y H then x = y U.
    """
    if not rows:
        return None if any(target) else []
    h, u = hnf_with_transform(rows)
    t = list(target)
    y = [0] * len(h)
    for i, row in enumerate(h):
        c = next((j for j, v in enumerate(row) if v != 0), None)
        if c is None:
            continue
        if t[c] % row[c] != 0:
            return None
        q = t[c] // row[c]
        y[i] = q
        if q:
            t = [a - q * b for a, b in zip(t, row)]
    if any(t):
        return None
    m = len(rows)
    x = [0] * m
    for i, yi in enumerate(y):
        if yi:
            for j in range(m):
                x[j] += yi * u[i][j]
    return x
