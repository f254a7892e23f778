"""Exact dense linear algebra over the rationals (small matrices only)."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .errors import FrameError


def identity(n: int) -> list:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def transpose(A: Sequence[Sequence]) -> list:
    return [list(r) for r in zip(*A)]


def matmul(A, B) -> list:
    return [[sum((a * b for a, b in zip(row, col)), Fraction(0)) for col in zip(*B)] for row in A]


def matvec(A, v) -> list:
    return [sum((a * b for a, b in zip(row, v)), Fraction(0)) for row in A]


def inverse(A: Sequence[Sequence]) -> list:
    """Gauss-Jordan inverse; raises :class:`FrameError` when ``A`` is singular."""
    n = len(A)
    M = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(A)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if M[r][col] != 0), None)
        if pivot is None:
            raise FrameError("matrix is singular")
        M[col], M[pivot] = M[pivot], M[col]
        p = M[col][col]
        M[col] = [x / p for x in M[col]]
        for r in range(n):
            if r != col and M[r][col] != 0:
                f = M[r][col]
                M[r] = [x - f * y for x, y in zip(M[r], M[col])]
    return [row[n:] for row in M]


def solve(A, b) -> list:
    return matvec(inverse(A), b)


def rank(A) -> int:
    M = [[Fraction(x) for x in row] for row in A]
    if not M:
        return 0
    rows, cols = len(M), len(M[0])
    r = 0
    for c in range(cols):
        pivot = next((i for i in range(r, rows) if M[i][c] != 0), None)
        if pivot is None:
            continue
        M[r], M[pivot] = M[pivot], M[r]
        for i in range(rows):
            if i != r and M[i][c] != 0:
                f = M[i][c] / M[r][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        r += 1
        if r == rows:
            break
    return r


def solve_least(A, b) -> list | None:
    """Exact solution of a consistent, possibly overdetermined system with full column rank."""
    At = transpose(A)
    try:
        x = solve(matmul(At, A), matvec(At, b))
    except FrameError:
        return None
    return x if matvec(A, x) == [Fraction(v) for v in b] else None
