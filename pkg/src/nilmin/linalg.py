"""Small exact linear algebra over the rationals.

Matrices are lists of rows of ``Fraction``.  Dimensions here are tiny
(at most a few dozen), so plain Gauss-Jordan elimination is adequate.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .exact import QuadraticSurd

Matrix = list[list[Fraction]]
Vector = list[Fraction]


def frac(x) -> Fraction:
    """Coerce ints, strings like ``"3/4"`` and Fractions to ``Fraction``."""
    if isinstance(x, (Fraction, QuadraticSurd)):
        return x
    if isinstance(x, float):
        raise TypeError("floats are not accepted where exact values are required")
    return Fraction(x)


def to_matrix(rows: Sequence[Sequence]) -> Matrix:
    return [[frac(v) for v in row] for row in rows]


def zeros(m: int, n: int | None = None) -> Matrix:
    n = m if n is None else n
    return [[Fraction(0)] * n for _ in range(m)]


def identity(n: int) -> Matrix:
    out = zeros(n)
    for i in range(n):
        out[i][i] = Fraction(1)
    return out


def diag(values: Sequence) -> Matrix:
    out = zeros(len(values))
    for i, v in enumerate(values):
        out[i][i] = frac(v)
    return out


def matmul(a: Matrix, b: Matrix) -> Matrix:
    bt = list(zip(*b))
    return [[sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in bt] for row in a]


def matvec(a: Matrix, v: Sequence[Fraction]) -> Vector:
    return [sum((x * y for x, y in zip(row, v)), Fraction(0)) for row in a]


def transpose(a: Matrix) -> Matrix:
    return [list(col) for col in zip(*a)]


def add(a: Matrix, b: Matrix) -> Matrix:
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def scale(a: Matrix, s) -> Matrix:
    s = frac(s)
    return [[s * x for x in row] for row in a]


def trace(a: Matrix) -> Fraction:
    return sum((a[i][i] for i in range(len(a))), Fraction(0))


def is_diagonal(a: Matrix) -> bool:
    return all(a[i][j] == 0 for i in range(len(a)) for j in range(len(a)) if i != j)


def rref(a: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and the list of pivot columns."""
    m = [row[:] for row in a]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        p = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return m, pivots


def rank(a: Matrix) -> int:
    if not a:
        return 0
    return len(rref(a)[1])


def inverse(a: Matrix) -> Matrix:
    n = len(a)
    aug = [row[:] + ident for row, ident in zip(a, identity(n))]
    red, piv = rref(aug)
    if piv[:n] != list(range(n)):
        raise ValueError("matrix is singular")
    return [row[n:] for row in red]


def nullspace(a: Matrix) -> list[Vector]:
    """Basis of {x : a x = 0}, one vector per free column."""
    n = len(a[0]) if a else 0
    red, piv = rref(a)
    free = [c for c in range(n) if c not in piv]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for r, p in enumerate(piv):
            v[p] = -red[r][f]
        basis.append(v)
    return basis


def solve_affine(a: Matrix, b: Sequence[Fraction]):
    """Solve ``a x = b`` exactly.

    Returns ``(particular, directions, free_columns)`` describing
    x = particular + sum_k t_k directions[k], or ``None`` if inconsistent.
    """
    n = len(a[0])
    aug = [row[:] + [frac(bi)] for row, bi in zip(a, b)]
    red, piv = rref(aug)
    if n in piv:
        return None
    particular = [Fraction(0)] * n
    for r, p in enumerate(piv):
        particular[p] = red[r][n]
    free = [c for c in range(n) if c not in piv]
    directions = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for r, p in enumerate(piv):
            v[p] = -red[r][f]
        directions.append(v)
    return particular, directions, free


def left_null_witness(a: Matrix, b: Sequence[Fraction]) -> Vector | None:
    """A vector y with y^T a = 0 and y^T b = 1, if ``a x = b`` is inconsistent."""
    rows = len(a)
    at = transpose(a)
    # y^T a = 0 and y^T b = 1 as a linear system in y
    system = [row[:] for row in at] + [[frac(x) for x in b]]
    rhs = [Fraction(0)] * len(at) + [Fraction(1)]
    sol = solve_affine(system, rhs)
    if sol is None:
        return None
    y = sol[0]
    assert len(y) == rows
    return y
