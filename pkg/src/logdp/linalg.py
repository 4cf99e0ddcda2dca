"""Exact integer/rational linear algebra on small dense matrices.

Matrices are plain sequences of rows.  Nothing here touches floating point.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

Matrix = Sequence[Sequence[int]]


def _copy(m: Matrix) -> list[list]:
    return [list(row) for row in m]


def _check_square(m: Matrix) -> int:
    n = len(m)
    for row in m:
        if len(row) != n:
            raise ValueError("matrix is not square")
    return n


def bareiss_determinant(m: Matrix) -> int:
    """Determinant by Bareiss fraction-free elimination (row swaps allowed)."""
    n = _check_square(m)
    if n == 0:
        return 1
    a = _copy(m)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = a[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * pivot - a[i][k] * a[k][j]) // prev
        prev = pivot
    return sign * a[n - 1][n - 1]


def leading_minors(m: Matrix) -> list[int]:
    """All leading principal minors, in order of size.

    Bareiss without pivoting leaves the k-th leading minor on the diagonal.
    If a pivot vanishes the remaining minors are computed one by one.
    """
    n = _check_square(m)
    a = _copy(m)
    minors: list[int] = []
    prev = 1
    for k in range(n):
        pivot = a[k][k]
        minors.append(pivot)
        if pivot == 0:
            minors.extend(
                bareiss_determinant([row[: j + 1] for row in m[: j + 1]])
                for j in range(k + 1, n)
            )
            return minors
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * pivot - a[i][k] * a[k][j]) // prev
        prev = pivot
    return minors


def solve_integer(m: Matrix, rhs: Sequence[int]) -> tuple[list[int], int]:
    """Fraction-free solve of m x = rhs for integer data.

    Returns ``(num, det)`` with x = num / det and ``det == det(m)``.  Forward
    elimination is Bareiss on the augmented matrix (first nonzero pivot in
    the column); back substitution divides exactly.  Raises
    ZeroDivisionError on a singular matrix.
    """
    n = _check_square(m)
    if len(rhs) != n:
        raise ValueError("right-hand side has wrong length")
    if n == 0:
        return [], 1
    a = [list(row) + [v] for row, v in zip(m, rhs)]
    sign = 1
    prev = 1
    for k in range(n):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                raise ZeroDivisionError("singular matrix")
        pivot = a[k][k]
        rowk = a[k]
        for i in range(k + 1, n):
            rowi = a[i]
            factor = rowi[k]
            for j in range(k + 1, n + 1):
                rowi[j] = (rowi[j] * pivot - factor * rowk[j]) // prev
            rowi[k] = 0
        prev = pivot
    det = a[n - 1][n - 1]
    num = [0] * n
    for i in range(n - 1, -1, -1):
        acc = det * a[i][n] - sum(a[i][j] * num[j] for j in range(i + 1, n))
        q, r = divmod(acc, a[i][i])
        if r:
            raise AssertionError("inexact division in fraction-free back substitution")
        num[i] = q
    if sign < 0:
        num = [-x for x in num]
    return num, sign * det


def solve(m: Matrix, rhs: Sequence[int | Fraction]) -> list[Fraction]:
    """Solve m x = rhs exactly (integer matrix, rational right-hand side)."""
    rhs = [Fraction(v) for v in rhs]
    den = 1
    for v in rhs:
        den = den * v.denominator // gcd(den, v.denominator)
    num, det = solve_integer(m, [int(v * den) for v in rhs])
    return [Fraction(x, det * den) for x in num]


def nullspace(m: Matrix) -> list[list[Fraction]]:
    """Basis of the rational kernel of m, via reduced row echelon form."""
    rows = [[Fraction(v) for v in row] for row in m]
    if not rows:
        return []
    ncols = len(rows[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [v * inv for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [vi - f * vr for vi, vr in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * ncols
        vec[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            vec[pc] = -rows[i][fc]
        basis.append(vec)
    return basis


def mat_vec(m: Matrix, v: Sequence) -> list:
    return [sum(a * b for a, b in zip(row, v)) for row in m]
