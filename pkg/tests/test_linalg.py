"""Exact rational matrix routines."""

from fractions import Fraction

from logvf.linalg import (
    charpoly,
    det,
    inverse,
    mat,
    mat_mul,
    nullspace,
    rank,
    row_space_contains,
    rref,
    solve,
)


def test_rref_pivots():
    R, pivots = rref(mat([[2, 0, -1], [0, 3, -1]]))
    assert pivots == [0, 1]
    assert R == mat([[1, 0, Fraction(-1, 2)], [0, 1, Fraction(-1, 3)]])


def test_rank_and_nullspace():
    A = mat([[1, 2, 3], [2, 4, 6]])
    assert rank(A) == 1
    basis = nullspace(A)
    assert len(basis) == 2
    for v in basis:
        assert all(x == 0 for x in (sum(a * b for a, b in zip(row, v)) for row in A))


def test_solve():
    A = mat([[1, 1], [1, -1]])
    assert solve(A, [Fraction(2), Fraction(0)]) == [Fraction(1), Fraction(1)]
    assert solve(mat([[1, 1], [1, 1]]), [Fraction(0), Fraction(1)]) is None


def test_det_and_inverse():
    A = mat([[2, 1], [1, 1]])
    assert det(A) == 1
    assert mat_mul(A, inverse(A)) == mat([[1, 0], [0, 1]])
    assert det(mat([[1, 2], [2, 4]])) == 0


def test_charpoly_companion():
    # diag(3,1,-1,-3): charpoly t^4 - 10t^2 + 9
    A = mat([[3, 0, 0, 0], [0, 1, 0, 0], [0, 0, -1, 0], [0, 0, 0, -3]])
    assert charpoly(A) == [Fraction(1), Fraction(0), Fraction(-10), Fraction(0), Fraction(9)]


def test_row_space_contains():
    rows = [mat([[1, 1, 1, 1]])[0], mat([[3, 1, -1, -3]])[0]]
    assert row_space_contains(rows, mat([[4, 2, 0, -2]])[0])
    assert not row_space_contains(rows, mat([[1, 0, 0, 0]])[0])
