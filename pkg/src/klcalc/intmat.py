"""Exact integer matrix helpers: Bareiss determinants and independence tests."""

from __future__ import annotations

from fractions import Fraction

import numpy as np

_PRIMES = (2_147_483_647, 2_147_483_629)  # < 2^31, so int64 products never overflow


def bareiss_det(matrix: list[list[int]]) -> int:
    """Determinant of a square integer matrix by fraction-free Bareiss elimination.

    All intermediate values stay integers; divisions are exact.
    """
    n = len(matrix)
    if n == 0:
        return 1
    m = [list(map(int, row)) for row in matrix]
    if any(len(row) != n for row in m):
        raise ValueError("matrix must be square")
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = m[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * pivot - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = pivot
    return sign * m[n - 1][n - 1]


def _rank_mod_p(rows: list[dict], cols_index: dict, p: int) -> int:
    a = np.zeros((len(rows), len(cols_index)), dtype=np.int64)
    for r, row in enumerate(rows):
        for key, val in row.items():
            a[r, cols_index[key]] = val % p
    rank = 0
    pivot_row = 0
    nrows, ncols = a.shape
    for col in range(ncols):
        sel = None
        for r in range(pivot_row, nrows):
            if a[r, col]:
                sel = r
                break
        if sel is None:
            continue
        if sel != pivot_row:
            a[[pivot_row, sel]] = a[[sel, pivot_row]]
        inv = pow(int(a[pivot_row, col]), p - 2, p)
        a[pivot_row] = a[pivot_row] * inv % p
        below = a[pivot_row + 1 :]
        mask = below[:, col] != 0
        if mask.any():
            below[mask] = (below[mask] - np.outer(below[:, col][mask], a[pivot_row])) % p
        rank += 1
        pivot_row += 1
        if pivot_row == nrows:
            break
    return rank


def _rank_exact(rows: list[dict], cols_index: dict) -> int:
    dense = [
        [Fraction(row.get(k, 0)) for k in sorted(cols_index, key=cols_index.get)]
        for row in rows
    ]
    rank = 0
    pivot_row = 0
    ncols = len(cols_index)
    for col in range(ncols):
        sel = None
        for r in range(pivot_row, len(dense)):
            if dense[r][col]:
                sel = r
                break
        if sel is None:
            continue
        dense[pivot_row], dense[sel] = dense[sel], dense[pivot_row]
        inv = 1 / dense[pivot_row][col]
        dense[pivot_row] = [x * inv for x in dense[pivot_row]]
        for r in range(len(dense)):
            if r != pivot_row and dense[r][col]:
                f = dense[r][col]
                dense[r] = [a - f * b for a, b in zip(dense[r], dense[pivot_row])]
        rank += 1
        pivot_row += 1
        if pivot_row == len(dense):
            break
    return rank


def sparse_rows_independent(rows: list[dict]) -> bool:
    """Are the given sparse integer vectors linearly independent over Q?

    A rational dependency clears denominators to a primitive integer one,
    which survives reduction modulo any prime, so full rank mod p *proves*
    independence over Q.  Two large primes are tried; the exact rational
    elimination fallback only runs if both degenerate.
    """
    if not rows:
        return True
    if any(not row for row in rows):
        return False
    keys = sorted({k for row in rows for k in row})
    if len(keys) < len(rows):
        return False
    cols_index = {k: i for i, k in enumerate(keys)}
    for p in _PRIMES:
        if _rank_mod_p(rows, cols_index, p) == len(rows):
            return True
    return _rank_exact(rows, cols_index) == len(rows)
