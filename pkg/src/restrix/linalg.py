"""Fraction-free (Bareiss) elimination over exact rings.

Works on plain nested lists whose entries are ints, Fractions or
:class:`~restrix.cyclo.Cyclotomic` values.  Pivoting always takes the first
row with a nonzero entry in the current column, so results are deterministic.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence


class SingularMatrixError(ArithmeticError):
    pass


def _div(a, b):
    # Bareiss quotients are exact; keep ints as ints
    if isinstance(a, int) and isinstance(b, int):
        q, r = divmod(a, b)
        assert r == 0, "inexact Bareiss division"
        return q
    return a / b


def _echelon(rows: list[list], ncols: int) -> tuple[list[list], list[int], int]:
    """In-place Bareiss forward elimination on the first ncols columns.

    Returns (matrix, pivot_columns, sign) where sign tracks row swaps.
    """
    m = [list(r) for r in rows]
    nrows = len(m)
    prev = 1
    pivots: list[int] = []
    sign = 1
    r = 0
    for c in range(ncols):
        if r >= nrows:
            break
        piv = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if piv is None:
            continue
        if piv != r:
            m[r], m[piv] = m[piv], m[r]
            sign = -sign
        p = m[r][c]
        scale = None if isinstance(prev, int) else 1 / prev
        for i in range(r + 1, nrows):
            f = m[i][c]
            row_i, row_r = m[i], m[r]
            for j in range(c + 1, len(row_i)):
                v = p * row_i[j] - f * row_r[j]
                row_i[j] = _div(v, prev) if scale is None else v * scale
            row_i[c] = 0 * p
        prev = p
        pivots.append(c)
        r += 1
    return m, pivots, sign


def rank(rows: Sequence[Sequence]) -> int:
    if not rows:
        return 0
    _, pivots, _ = _echelon([list(r) for r in rows], len(rows[0]))
    return len(pivots)


def determinant(rows: Sequence[Sequence]):
    n = len(rows)
    m, pivots, sign = _echelon([list(r) for r in rows], n)
    if len(pivots) < n:
        return 0 * rows[0][0]
    # Bareiss: the last pivot is the determinant
    return sign * m[n - 1][n - 1]


def solve(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list]:
    """Solve A X = B for square nonsingular A; B has one column per right-hand side."""
    n = len(a)
    if any(len(row) != n for row in a):
        raise ValueError("coefficient matrix must be square")
    if len(b) != n:
        raise ValueError("right-hand side has the wrong number of rows")
    k = len(b[0]) if n else 0
    aug = [list(a[i]) + list(b[i]) for i in range(n)]
    m, pivots, _ = _echelon(aug, n)
    if len(pivots) < n:
        raise SingularMatrixError(f"matrix of size {n} has rank {len(pivots)}")
    x = [[None] * k for _ in range(n)]
    for col in range(k):
        for i in range(n - 1, -1, -1):
            acc = m[i][n + col]
            for j in range(i + 1, n):
                acc = acc - m[i][j] * x[j][col]
            x[i][col] = _field_div(acc, m[i][i])
    return x


def _field_div(a, b):
    if isinstance(a, int) and isinstance(b, int):
        return Fraction(a, b)
    return a / b


def inverse(a: Sequence[Sequence]) -> list[list]:
    n = len(a)
    one = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    return solve(a, one)
