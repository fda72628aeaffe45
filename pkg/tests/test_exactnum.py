import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from swlab.exactnum import (FieldError, Matrix, QuadScalar, bareiss_rank, column_space,
                            inverse, kron, linear_solve, mat_rank, squarefree_split)

small = st.integers(-20, 20)
nonzero_den = st.integers(1, 12)


@st.composite
def q5(draw):
    return QuadScalar(draw(small), draw(small), draw(nonzero_den), 5)


def test_normal_form():
    x = QuadScalar(6, 4, 2, 5)
    assert (x.a, x.b, x.c, x.d) == (3, 2, 1, 5)
    assert QuadScalar(1, 1, 1, 4) == QuadScalar(3)  # sqrt 4 folds into the rationals
    assert QuadScalar(0, 1, 1, 20) == QuadScalar(0, 2, 1, 5)
    assert QuadScalar(2, 0, -4) == QuadScalar(-1, 0, 2)


def test_squarefree_split():
    assert squarefree_split(20) == (2, 5)
    assert squarefree_split(7) == (1, 7)
    assert squarefree_split(36) == (6, 1)


def test_golden_ratio_identities():
    phi = (1 + QuadScalar.sqrt(5)) / 2
    assert phi * phi == phi + 1
    assert phi.inverse() == phi - 1
    x = (3 + QuadScalar.sqrt(5)) / 2
    assert x + 1 / x == 3


def test_sign_and_order():
    assert QuadScalar(3, -1, 1, 5).sign() == 1  # 3 > sqrt 5
    assert QuadScalar(2, -1, 1, 5).sign() == -1
    assert QuadScalar(0) < (3 - QuadScalar.sqrt(5)) / 2 < 1


def test_mixed_fields_rejected():
    with pytest.raises(FieldError):
        QuadScalar.sqrt(2) + QuadScalar.sqrt(3)


@given(q5(), q5(), q5())
@settings(max_examples=80, deadline=None)
def test_field_axioms(x, y, z):
    assert (x + y) + z == x + (y + z)
    assert x * (y + z) == x * y + x * z
    assert x * y == y * x
    if not x.is_zero():
        assert x * x.inverse() == 1
    assert abs(float(x * y) - float(x) * float(y)) < 1e-9 * (1 + abs(float(x * y)))


@given(q5())
def test_json_round_trip(x):
    assert QuadScalar.from_json(x.to_json(), 5) == x


def test_rank_matches_bareiss_oracle():
    s = QuadScalar.sqrt(5)
    rows = [[1, s, 2], [s, 5, 2 * s], [0, 1, 1]]
    assert bareiss_rank(rows) == 2
    assert mat_rank(Matrix.from_rows(rows)) == 2


@given(st.lists(st.lists(st.tuples(st.integers(-3, 3), st.integers(-3, 3)),
                         min_size=4, max_size=4), min_size=1, max_size=5))
@settings(max_examples=60, deadline=None)
def test_rank_property(raw):
    rows = [[QuadScalar(a, b, 1, 5) for a, b in r] for r in raw]
    assert mat_rank(Matrix.from_rows(rows)) == bareiss_rank(rows)


def test_linear_solve_and_kernel():
    s = QuadScalar.sqrt(5)
    A = Matrix.from_rows([[1, s], [s, 5]])
    b = Matrix.column([1, s])
    sol = linear_solve(A, b)
    assert sol.consistent and len(sol.kernel) == 1
    assert A @ sol.particular == b
    assert (A @ sol.kernel[0]).is_zero()
    assert not linear_solve(A, Matrix.column([1, 0])).consistent


def test_inverse_and_kron():
    s = QuadScalar.sqrt(5)
    A = Matrix.from_rows([[2, s], [1, 3]])
    assert A @ inverse(A) == Matrix.identity(2)
    K = kron(A, Matrix.identity(2))
    assert K.shape == (4, 4)
    assert K[1, 3] == s and K[0, 1] == 0


def test_column_space_keeps_independent_columns():
    s = QuadScalar.sqrt(5)
    A = Matrix.from_rows([[1, s, 0], [s, 5, 1]])
    B = column_space(A)
    assert B.cols == 2 and mat_rank(B) == 2


def test_float_mode():
    A = Matrix.from_float(np.array([[1.0, 2.0], [2.0, 4.0 + 1e-12]]))
    assert mat_rank(A) == 1
    assert not A.is_exact
    x = linear_solve(Matrix.from_float(np.eye(2)), Matrix.from_float(np.ones((2, 1))))
    assert x.unique


def test_solve_rational_matrix_irrational_rhs():
    r5 = QuadScalar.sqrt(5)
    A = Matrix.from_rows([[1, 1], [0, 2]])
    b = Matrix.from_rows([[r5 + 1], [r5 * 2]])
    sol = linear_solve(A, b)
    assert sol.consistent
    assert A @ sol.particular == b
