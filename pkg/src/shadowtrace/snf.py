"""Smith normal form and basic exact integer linear algebra.

All computations use arbitrary-precision Python integers.  Pivots are chosen
by least absolute value, which keeps coefficient growth tame at the sizes
this library meets (matrices with a few hundred rows).
"""

from __future__ import annotations


def smith_normal_form(m: list[list[int]]) -> tuple[list[list[int]], list[list[int]], list[list[int]]]:
    """Return ``(U, D, V)`` with ``U @ m @ V == D``.

    ``U`` and ``V`` are unimodular; ``D`` is diagonal with non-negative
    entries forming a divisibility chain d1 | d2 | ...
    """
    rows = len(m)
    cols = len(m[0]) if rows else 0
    d = [list(map(int, row)) for row in m]
    u = _eye(rows)
    v = _eye(cols)

    t = 0
    while True:
        pivot = _smallest_nonzero(d, t)
        if pivot is None:
            break
        _move_pivot(d, u, v, t, pivot)
        # clear row and column t; restarts while new nonzeros appear
        while True:
            for i in range(t + 1, rows):
                if d[i][t]:
                    q = d[i][t] // d[t][t]
                    _row_sub(d, u, i, t, q)
            for j in range(t + 1, cols):
                if d[t][j]:
                    q = d[t][j] // d[t][t]
                    _col_sub(d, v, j, t, q)
            if all(d[i][t] == 0 for i in range(t + 1, rows)) and all(
                d[t][j] == 0 for j in range(t + 1, cols)
            ):
                break
            _move_pivot(d, u, v, t, _smallest_nonzero(d, t))
        t += 1

    _fix_signs(d, u, min(rows, cols))
    _fix_divisibility(d, u, v, min(rows, cols))
    return u, d, v


def _eye(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def _smallest_nonzero(d, t):
    best = None
    for i in range(t, len(d)):
        for j in range(t, len(d[0]) if d else 0):
            if d[i][j] and (best is None or abs(d[i][j]) < abs(d[best[0]][best[1]])):
                best = (i, j)
    return best


def _move_pivot(d, u, v, t, pivot):
    i, j = pivot
    if i != t:
        d[i], d[t] = d[t], d[i]
        u[i], u[t] = u[t], u[i]
    if j != t:
        for row in d:
            row[j], row[t] = row[t], row[j]
        for row in v:
            row[j], row[t] = row[t], row[j]


def _row_sub(d, u, i, t, q):
    for j in range(len(d[0])):
        d[i][j] -= q * d[t][j]
    for j in range(len(u[0])):
        u[i][j] -= q * u[t][j]


def _col_sub(d, v, j, t, q):
    for i in range(len(d)):
        d[i][j] -= q * d[i][t]
    for i in range(len(v)):
        v[i][j] -= q * v[i][t]


def _fix_signs(d, u, k):
    for t in range(k):
        if d[t][t] < 0:
            for j in range(len(d[0])):
                d[t][j] = -d[t][j]
            for j in range(len(u[0])):
                u[t][j] = -u[t][j]


def _fix_divisibility(d, u, v, k):
    # Standard fix-up: fold d[t+1] into d[t] until each divides the next.
    changed = True
    while changed:
        changed = False
        for t in range(k - 1):
            a, b = d[t][t], d[t + 1][t + 1]
            if a and b and b % a != 0:
                # add column t+1 to column t, then re-reduce the 2x2 block
                for i in range(len(d)):
                    d[i][t] += d[i][t + 1]
                for i in range(len(v)):
                    v[i][t] += v[i][t + 1]
                _rediagonalize_block(d, u, v, t)
                changed = True
            elif a == 0 and b != 0:
                # push the zero past the nonzero entry
                _swap_rows_cols(d, u, v, t)
                changed = True


def _rediagonalize_block(d, u, v, t):
    rows, cols = len(d), len(d[0])
    while True:
        pivot = _smallest_nonzero(d, t)
        _move_pivot(d, u, v, t, pivot)
        for i in range(t + 1, rows):
            if d[i][t]:
                _row_sub(d, u, i, t, d[i][t] // d[t][t])
        for j in range(t + 1, cols):
            if d[t][j]:
                _col_sub(d, v, j, t, d[t][j] // d[t][t])
        if all(d[i][t] == 0 for i in range(t + 1, rows)) and all(
            d[t][j] == 0 for j in range(t + 1, cols)
        ):
            break
    _fix_signs(d, u, min(rows, cols))


def _swap_rows_cols(d, u, v, t):
    d[t], d[t + 1] = d[t + 1], d[t]
    u[t], u[t + 1] = u[t + 1], u[t]
    for row in d:
        row[t], row[t + 1] = row[t + 1], row[t]
    for row in v:
        row[t], row[t + 1] = row[t + 1], row[t]


def mat_mul(a: list[list[int]], b: list[list[int]]) -> list[list[int]]:
    rows, inner, cols = len(a), len(b), len(b[0]) if b else 0
    out = [[0] * cols for _ in range(rows)]
    for i in range(rows):
        ai = a[i]
        for k in range(inner):
            c = ai[k]
            if c:
                bk = b[k]
                oi = out[i]
                for j in range(cols):
                    oi[j] += c * bk[j]
    return out


def mat_vec(a: list[list[int]], x: list[int]) -> list[int]:
    return [sum(row[j] * x[j] for j in range(len(x))) for row in a]


def det(m: list[list[int]]) -> int:
    """Fraction-free Bareiss determinant."""
    n = len(m)
    if n == 0:
        return 1
    a = [list(map(int, row)) for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k]), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def unimodular_inverse(m: list[list[int]]) -> list[list[int]]:
    """Inverse of a matrix with determinant ±1, computed exactly."""
    n = len(m)
    u, d, v = smith_normal_form(m)
    if any(d[i][i] != 1 for i in range(n)):
        raise ValueError("matrix is not unimodular")
    return mat_mul(v, u)


def integer_kernel(m: list[list[int]]) -> list[list[int]]:
    """A basis of the integer kernel {x : m @ x == 0}, as column vectors."""
    rows = len(m)
    cols = len(m[0]) if rows else 0
    if cols == 0:
        return []
    _, d, v = smith_normal_form(m)
    rank = sum(1 for i in range(min(rows, cols)) if d[i][i] != 0)
    return [[v[i][j] for i in range(cols)] for j in range(rank, cols)]
