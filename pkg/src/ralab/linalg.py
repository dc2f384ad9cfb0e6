"""Exact linear algebra over the rationals on lists of lists."""

from __future__ import annotations

from typing import Sequence

from ralab.poly import qq


def _copy(m):
    return [[qq(x) for x in row] for row in m]


def rref(m: Sequence[Sequence]) -> tuple[list[list], list[int]]:
    """Reduced row echelon form and pivot columns."""
    a = _copy(m)
    rows = len(a)
    cols = len(a[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if a[i][c]), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return a, pivots


def rank(m) -> int:
    return len(rref(m)[1]) if m else 0


def nullspace(m: Sequence[Sequence], ncols: int | None = None) -> list[list]:
    """Basis of ``{x : m x = 0}``."""
    if not m:
        n = ncols or 0
        return [[qq(int(i == j)) for i in range(n)] for j in range(n)]
    a, piv = rref(m)
    n = len(a[0])
    free = [c for c in range(n) if c not in piv]
    basis = []
    for f in free:
        v = [qq(0)] * n
        v[f] = qq(1)
        for i, p in enumerate(piv):
            v[p] = -a[i][f]
        basis.append(v)
    return basis


def left_kernel(m) -> list[list]:
    """Basis of ``{y : y m = 0}``."""
    return nullspace(transpose(m), len(m))


def row_space(m) -> list[list]:
    a, piv = rref(m)
    return a[:len(piv)]


def transpose(m):
    if not m:
        return []
    return [list(col) for col in zip(*m)]


def solve(m: Sequence[Sequence], b: Sequence) -> list | None:
    """One solution of ``m x = b`` or None."""
    if not m:
        return None if any(b) else []
    n = len(m[0])
    aug = [list(row) + [y] for row, y in zip(m, b)]
    a, piv = rref(aug)
    if n in piv:
        return None
    x = [qq(0)] * n
    for i, p in enumerate(piv):
        x[p] = a[i][n]
    return x


def inverse(m) -> list[list] | None:
    n = len(m)
    aug = [list(row) + [int(i == j) for j in range(n)] for i, row in enumerate(m)]
    a, piv = rref(aug)
    if piv[:n] != list(range(n)) or len(piv) < n or (piv and piv[n - 1] >= n):
        return None
    return [row[n:] for row in a[:n]]


def matmul(a, b):
    bt = transpose(b)
    return [[sum((x * y for x, y in zip(row, col)), qq(0)) for col in bt] for row in a]


def identity(n):
    return [[qq(int(i == j)) for j in range(n)] for i in range(n)]
