"""Exact rational matrices (just enough for trivializations)."""
from __future__ import annotations

from .poly import Rational


Matrix = list[list[Rational]]


def identity_matrix(n: int) -> Matrix:
    return [[Rational(int(i == j)) for j in range(n)] for i in range(n)]


def matmul(a: Matrix, b: Matrix) -> Matrix:
    inner = len(b)
    cols = len(b[0]) if b else 0
    return [[sum((row[k] * b[k][j] for k in range(inner)), Rational(0)) for j in range(cols)] for row in a]


def _eliminate(m: Matrix, rhs: Matrix | None):
    n = len(m)
    a = [list(map(Rational, row)) for row in m]
    b = [list(row) for row in rhs] if rhs is not None else None
    det = Rational(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            return Rational(0), None
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            if b is not None:
                b[col], b[pivot] = b[pivot], b[col]
            det = -det
        pv = a[col][col]
        det *= pv
        a[col] = [x / pv for x in a[col]]
        if b is not None:
            b[col] = [x / pv for x in b[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                factor = a[r][col]
                a[r] = [x - factor * y for x, y in zip(a[r], a[col])]
                if b is not None:
                    b[r] = [x - factor * y for x, y in zip(b[r], b[col])]
    return det, b


def det(m: Matrix) -> Rational:
    if any(len(row) != len(m) for row in m):
        raise ValueError("determinant of a non-square matrix")
    return _eliminate(m, None)[0]


def inverse(m: Matrix) -> Matrix:
    if any(len(row) != len(m) for row in m):
        raise ValueError("inverse of a non-square matrix")
    d, inv = _eliminate(m, identity_matrix(len(m)))
    if d == 0:
        raise ZeroDivisionError("singular matrix")
    return inv
