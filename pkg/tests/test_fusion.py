from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from swlab.fusion import dim_check, fuse, lr_coeffs
from swlab.poincare import z_mu
from swlab.schurweyl import PartitionError, character, enumerate_partitions

from conftest import ALPHA_N3


def lr_by_characters(lam, mu):
    # c^nu = < restriction of chi^nu to S_a x S_b , chi^lam x chi^mu >
    a, b = sum(lam), sum(mu)
    out = {}
    for nu in enumerate_partitions(a + b):
        total = Fraction(0)
        for x in enumerate_partitions(a):
            for y in enumerate_partitions(b):
                joined = tuple(sorted(x + y, reverse=True))
                total += Fraction(character(lam, x) * character(mu, y) * character(nu, joined),
                                  z_mu(x) * z_mu(y))
        if total:
            assert total.denominator == 1
            out[nu] = int(total)
    return out


small_parts = [l for m in range(1, 5) for l in enumerate_partitions(m)]


@pytest.mark.parametrize("lam", small_parts)
def test_lr_matches_character_oracle(lam):
    for mu in small_parts:
        if sum(lam) + sum(mu) <= 7:
            assert lr_coeffs(lam, mu) == lr_by_characters(lam, mu)


def test_lr_examples():
    assert lr_coeffs((2, 1), (2, 1)) == {(4, 2): 1, (4, 1, 1): 1, (3, 3): 1, (3, 2, 1): 2,
                                         (3, 1, 1, 1): 1, (2, 2, 2): 1, (2, 2, 1, 1): 1}
    assert lr_coeffs((1,), (1,)) == {(2,): 1, (1, 1): 1}


def test_fuse_two_two_rank_two():
    res = fuse((2,), (2,), 2)
    assert set(res.raw) == {(4,), (3, 1), (2, 2)}
    assert res.terms == {(4,): 1, (2,): 1, (): 1}
    assert res.to_json()["reduced"] == {"4": 1, "2": 1, "0": 1}


def test_fuse_drops_long_diagrams():
    res = fuse((1, 1), (1,), 2)
    assert res.dropped == {(1, 1, 1): 1}
    assert res.terms == {(1,): 1}
    with pytest.raises(PartitionError):
        fuse((1, 1, 1), (1,), 2)


def test_fuse_without_reduction():
    assert fuse((2,), (2,), 2, central=False).terms == {(4,): 1, (3, 1): 1, (2, 2): 1}


def _product(terms_a, terms_b, p):
    out = {}
    for x, cx in terms_a.items():
        for y, cy in terms_b.items():
            for nu, c in fuse(x, y, p).terms.items():
                out[nu] = out.get(nu, 0) + c * cx * cy
    return {k: v for k, v in out.items() if v}


def _unit_safe_fuse(x, y, p):
    if not x:
        return {y: 1}
    if not y:
        return {x: 1}
    return fuse(x, y, p).terms


rank3 = st.sampled_from([l for m in range(1, 4) for l in enumerate_partitions(m) if len(l) <= 3])


@given(rank3, rank3, rank3)
@settings(max_examples=30, deadline=None)
def test_fusion_is_commutative_and_associative(a, b, c):
    p = 3
    assert fuse(a, b, p).terms == fuse(b, a, p).terms
    left, right = {}, {}
    for x, cx in fuse(a, b, p).terms.items():
        for nu, cc in _unit_safe_fuse(x, c, p).items():
            left[nu] = left.get(nu, 0) + cx * cc
    for y, cy in fuse(b, c, p).terms.items():
        for nu, cc in _unit_safe_fuse(a, y, p).items():
            right[nu] = right.get(nu, 0) + cy * cc
    assert left == right


def test_dim_check_identity():
    chk = dim_check((2,), (2,), 2, e=[1, 3, 1])
    assert (chk.dim_lhs, chk.dim_rhs, chk.dim_sum) == (8, 8, 64)
    assert chk.consistent
    assert chk.to_json() == {"dim_lhs": 8, "dim_rhs": 8, "dim_sum": 64, "consistent": True}


def test_dim_check_all_small_pairs_rank_two():
    parts = [l for m in range(1, 5) for l in enumerate_partitions(m) if len(l) <= 2]
    for lam in parts:
        for mu in parts:
            assert dim_check(lam, mu, 2, alpha=ALPHA_N3).consistent


def test_dim_check_glued_rank_four():
    parts = [l for m in range(1, 4) for l in enumerate_partitions(m)]
    for lam in parts:
        for mu in parts:
            assert dim_check(lam, mu, 4, e=[1, 5, 8, 5, 1]).consistent


def test_dim_check_float_alpha():
    assert dim_check((2, 1), (1,), 2, alpha=[0.381966011250105, 2.618033988749895]).consistent


def test_dim_check_bad_input():
    with pytest.raises(ValueError):
        dim_check((1,), (1,), 2, e=[1, 3])
