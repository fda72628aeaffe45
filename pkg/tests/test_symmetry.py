import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from swlab.exactnum import Matrix, QuadScalar
from swlab.symmetry import (Permutation, Symmetry, SymmetryError, build_rank2, classical_pair,
                            flip, flip_matrix, glue, skew_diagonal_n3, super_example,
                            verify_matrix)


def test_permutation_product_and_word():
    s1 = Permutation.transposition(3, 1, 2)
    s2 = Permutation.transposition(3, 2, 3)
    p = s1 * s2
    assert p(3) == s1(s2(3)) == 1
    assert Permutation.from_word(3, p.word()) == p
    assert p.sign() == 1 and p.cycle_type() == (3,)


@given(st.permutations(list(range(1, 6))))
def test_word_recomposes(images):
    p = Permutation(images)
    assert Permutation.from_word(5, p.word()) == p
    assert p * p.inverse() == Permutation.identity(5)
    assert (-1) ** len(p.word()) == p.sign()


@pytest.mark.parametrize("branch", ["plus", "minus"])
def test_n3_family_axioms(branch):
    S = build_rank2(*skew_diagonal_n3(1, 1, branch))
    assert S.d == 5
    rep = S.report
    assert rep.involutive and rep.qybe and rep.remark21_conjugation


@pytest.mark.parametrize("a,b", [(2, 1), (1, -3), (QuadScalar(1, 1, 2, 5), 5)])
def test_n3_family_other_parameters(a, b):
    assert build_rank2(*skew_diagonal_n3(a, b)).report.ok


def test_classical_pair_is_the_flip(classical):
    assert classical.is_classical_flip


def test_rank2_constraints_checked():
    u, v = skew_diagonal_n3(1, 1)
    with pytest.raises(SymmetryError):
        build_rank2(u.scale(2), v)


def test_non_symmetry_rejected():
    S = flip_matrix(2)
    bad = S + Matrix.identity(4).scale(QuadScalar(1, 0, 3))
    assert not verify_matrix(bad, 2).ok
    with pytest.raises(SymmetryError):
        Symmetry(bad, 2)


def test_rho_is_a_homomorphism(n3):
    m = 3
    perms = list(Permutation.all(m))
    for p, q in itertools.product(perms, perms):
        assert n3.rho(m, p * q) == n3.rho(m, p) @ n3.rho(m, q)


def test_braid_relation_on_t4(n3):
    a, b = n3.local(4, 2), n3.local(4, 3)
    assert a @ b @ a == b @ a @ b
    assert n3.local(4, 1) @ n3.local(4, 3) == n3.local(4, 3) @ n3.local(4, 1)


def test_glue_and_super(glued):
    assert glued.n == 5 and glued.report.ok
    for b in (0, 1, QuadScalar(2)):
        assert super_example(b).report.ok


def test_json_round_trip(n3, glued):
    for S in (n3, glued, super_example(1)):
        back = Symmetry.from_json(S.to_json())
        assert back.S == S.S and back.n == S.n


def test_float_mode_agrees(n3):
    F = n3.to_float()
    assert not F.S.is_exact and F.report.ok
    assert np.allclose(F.S.to_numpy(), n3.S.to_numpy())


def test_flip_is_symmetry():
    assert flip(3).report.ok
