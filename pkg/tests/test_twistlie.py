import random
from fractions import Fraction

import pytest

from swlab.exactnum import Matrix, QuadScalar, kron
from swlab.poincare import dual_tensors
from swlab.schurweyl import enumerate_partitions, shift
from swlab.symmetry import Permutation
from swlab.twistlie import (act_on_det, casimir_eigenvalue, casimir_matrix, casimir_on_component,
                            casimir_sl_eigenvalue, crossings, lie_data, random_coefficients,
                            trace_det)

from conftest import gauge


@pytest.fixture(scope="module")
def lie_n3(n3):
    return lie_data(n3)


def test_crossings_n3(n3):
    ext = crossings(n3)
    assert ext.ok()
    assert ext.report.involutive and ext.report.qybe
    I = Matrix.identity(9)
    assert ext.S_VVd @ ext.S_VdV == I and ext.S_VdV @ ext.S_VVd == I
    assert ext.S_VdVd @ ext.S_VdVd == I


def test_crossings_classical_are_flips(classical):
    ext = crossings(classical)
    assert ext.ok()
    assert ext.S_VdVd == classical.S


def test_lie_axioms_n3(lie_n3):
    for name in ["s_end_involutive", "skew", "trace_of_bracket", "invariance_right",
                 "invariance_left", "jacobi", "trace_id_equals_rank", "f_ii_zero",
                 "sl_traceless"]:
        assert lie_n3.checks[name], name
    assert lie_n3.p == 2


def test_trace_is_B_not_C(n3, lie_n3):
    duals = dual_tensors(n3)
    assert lie_n3.trace_matrix == duals.B
    assert lie_n3.trace_matrix == duals.Cdet.T.scale(2)
    assert lie_n3.checks["trace_is_B"] and not lie_n3.checks["trace_is_C"]


def test_classical_bracket_is_commutator(classical):
    data = lie_data(classical)
    assert data.checks["trace_is_C"]
    a = [[1, 2], [0, -1]]
    b = [[0, 1], [3, 4]]
    X, Y = data.element(a), data.element(b)

    def as_mat(v):
        return Matrix.from_rows([[v[i * 2 + j, 0] for j in range(2)] for i in range(2)])

    A, B = as_mat(X), as_mat(Y)
    assert as_mat(data.bracket_of(X, Y)) == A @ B - B @ A


def test_bracket_with_identity_vanishes(lie_n3):
    I = lie_n3.identity()
    for f in lie_n3.sl_basis:
        assert lie_n3.bracket_of(I, f) == Matrix.zeros(9, 1)


def test_casimir_low_degrees(n3):
    assert casimir_matrix(n3, 1) == Matrix.identity(3).scale(2)
    assert casimir_matrix(n3, 2) == Matrix.identity(9).scale(4) + n3.S.scale(2)


def test_casimir_commutes_with_braid_action(n3):
    C = casimir_matrix(n3, 3)
    for k in (1, 2):
        R = n3.rho(3, Permutation.transposition(3, k, k + 1))
        assert C @ R == R @ C


@pytest.mark.parametrize("lam", [l for m in range(1, 5) for l in enumerate_partitions(m)
                                 if len(l) <= 2])
def test_casimir_scalar_on_components(n3, lam):
    assert casimir_on_component(n3, lam) == casimir_eigenvalue(lam, 2)


def test_casimir_special_cases():
    p = 3
    for m in range(1, 7):
        assert casimir_eigenvalue((m,), p) == m * p + m * (m - 1)
        if m <= p:
            assert casimir_eigenvalue((1,) * m, p) == m * p - m * (m - 1)
    assert casimir_sl_eigenvalue((2,), 2) == 4
    assert casimir_sl_eigenvalue((4,), 2) == 12


@pytest.mark.parametrize("p", [2, 3, 4])
def test_sl_eigenvalue_shift_invariance(p):
    for m in range(1, 7):
        for lam in enumerate_partitions(m):
            if len(lam) > p:
                continue
            for a in (1, 2):
                assert casimir_sl_eigenvalue(shift(lam, a, p), p) == casimir_sl_eigenvalue(lam, p)


def _sl_coefficients(S, i, j):
    n = S.n
    a = [[Fraction(0)] * n for _ in range(n)]
    a[i][j] = Fraction(1)
    t = trace_det(S, a)
    return [[a[r][c] - (t if r == c else 0) for c in range(n)] for r in range(n)]


def test_det_action_on_sl_basis(n3):
    for i in range(3):
        for j in range(3):
            assert act_on_det(n3, _sl_coefficients(n3, i, j)) == 0


def test_det_action_is_p_times_trace(n3):
    rng = random.Random(7)
    for _ in range(20):
        a = random_coefficients(3, rng)
        assert act_on_det(n3, a) == trace_det(n3, a) * 2


def test_det_action_in_gauge(n3):
    S = gauge(n3, Matrix.from_rows([[1, 2, 0], [0, 1, 1], [1, 0, 1]]))
    rng = random.Random(11)
    for _ in range(3):
        a = random_coefficients(3, rng)
        assert act_on_det(S, a) == trace_det(S, a) * 2


def test_det_action_of_identity(n3):
    assert act_on_det(n3, [[1, 0, 0], [0, 1, 0], [0, 0, 1]]) == 2
