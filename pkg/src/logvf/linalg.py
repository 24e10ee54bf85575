"""Exact linear algebra over Q: small dense matrices as lists of Fraction rows."""

from __future__ import annotations

from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

Matrix = List[List[Fraction]]
Vector = List[Fraction]


def mat(rows: Sequence[Sequence]) -> Matrix:
    return [[Fraction(x) for x in row] for row in rows]


def identity(n: int) -> Matrix:
    return [[Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]


def zeros(r: int, c: int) -> Matrix:
    return [[Fraction(0)] * c for _ in range(r)]

def transpose(A: Matrix) -> Matrix:
    return [list(col) for col in zip(*A)]


def mat_mul(A: Matrix, B: Matrix) -> Matrix:
    rb = len(B)
    cb = len(B[0])
    out = zeros(len(A), cb)
    for i, row in enumerate(A):
        for k in range(rb):
            a = row[k]
            if a:
                brow = B[k]
                orow = out[i]
                for j in range(cb):
                    orow[j] += a * brow[j]
    return out


def mat_add(A: Matrix, B: Matrix) -> Matrix:
    return [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_sub(A: Matrix, B: Matrix) -> Matrix:
    return [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_scale(A: Matrix, c: Fraction) -> Matrix:
    return [[c * x for x in row] for row in A]


def mat_vec(A: Matrix, v: Vector) -> Vector:
    return [sum((a * x for a, x in zip(row, v)), Fraction(0)) for row in A]


def mat_pow(A: Matrix, k: int) -> Matrix:
    n = len(A)
    out = identity(n)
    base = [row[:] for row in A]
    while k:
        if k & 1:
            out = mat_mul(out, base)
        k >>= 1
        if k:
            base = mat_mul(base, base)
    return out


def is_zero_matrix(A: Matrix) -> bool:
    return all(x == 0 for row in A for x in row)


def trace(A: Matrix) -> Fraction:
    return sum((A[i][i] for i in range(len(A))), Fraction(0))


def rref(A: Matrix) -> Tuple[Matrix, List[int]]:
    """Reduced row echelon form and pivot column indices."""
    M = [row[:] for row in A]
    rows = len(M)
    cols = len(M[0]) if rows else 0
    pivots: List[int] = []
    r = 0
    for c in range(cols):
        pivot = next((i for i in range(r, rows) if M[i][c] != 0), None)
        if pivot is None:
            continue
        M[r], M[pivot] = M[pivot], M[r]
        inv = Fraction(1) / M[r][c]
        M[r] = [x * inv for x in M[r]]
        for i in range(rows):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return M, pivots


def rank(A: Matrix) -> int:
    if not A:
        return 0
    return len(rref(A)[1])


def nullspace(A: Matrix) -> List[Vector]:
    """Canonical kernel basis: one vector per free column, unit at the free
    column, read off the rref."""
    if not A:
        return []
    R, pivots = rref(A)
    cols = len(A[0])
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * cols
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -R[r][fc]
        basis.append(v)
    return basis


def solve(A: Matrix, b: Vector) -> Optional[Vector]:
    """One solution of A x = b, or None."""
    if not A:
        return None
    aug = [row[:] + [bv] for row, bv in zip(A, b)]
    R, pivots = rref(aug)
    cols = len(A[0])
    if cols in pivots:
        return None
    x = [Fraction(0)] * cols
    for r, pc in enumerate(pivots):
        x[pc] = R[r][cols]
    return x


def det(A: Matrix) -> Fraction:
    n = len(A)
    M = [row[:] for row in A]
    out = Fraction(1)
    for c in range(n):
        pivot = next((i for i in range(c, n) if M[i][c] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != c:
            M[c], M[pivot] = M[pivot], M[c]
            out = -out
        out *= M[c][c]
        inv = Fraction(1) / M[c][c]
        for i in range(c + 1, n):
            if M[i][c]:
                f = M[i][c] * inv
                M[i] = [x - f * y for x, y in zip(M[i], M[c])]
    return out


def inverse(A: Matrix) -> Matrix:
    n = len(A)
    aug = [row[:] + list(identity(n)[i]) for i, row in enumerate(A)]
    R, pivots = rref(aug)
    if pivots != list(range(n)):
        raise ValueError("matrix not invertible")
    return [row[n:] for row in R]


def charpoly(A: Matrix) -> List[Fraction]:
    """Coefficients [1, c1, ..., cn] of t^n + c1 t^(n-1) + ... + cn
    (Faddeev-LeVerrier)."""
    n = len(A)
    coeffs = [Fraction(1)]
    B = identity(n)
    for k in range(1, n + 1):
        M = mat_mul(A, B)
        ck = -trace(M) / k
        coeffs.append(ck)
        B = [row[:] for row in M]
        for i in range(n):
            B[i][i] += ck
    return coeffs


def row_space_contains(rows: Sequence[Vector], v: Vector) -> bool:
    """Is v in the Q-span of the given rows?"""
    rows = [list(r) for r in rows]
    if not rows:
        return all(x == 0 for x in v)
    return rank(rows) == rank(rows + [list(v)])
