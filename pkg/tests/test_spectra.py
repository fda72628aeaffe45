import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from swlab.exactnum import QuadScalar
from swlab.schurweyl import schur_dim
from swlab.spectra import (SpectrumError, count_N, hyperboloid_alpha, hyperboloid_multiplicities,
                           hyperboloid_spectrum, multiplicity_closed_form, orbit_spectrum_cpn,
                           table_csv, weyl_fit)

from conftest import ALPHA_N3


def test_hyperboloid_table_n3():
    t = hyperboloid_spectrum(3, 3)
    assert [(int(r.eigenvalue), r.multiplicity) for r in t.rows] == [(0, 1), (4, 8), (12, 55),
                                                                      (24, 377)]
    assert t.cumulative() == [1, 9, 64, 441]


def test_alpha_roots():
    a1, a2 = hyperboloid_alpha(3)
    assert a1 * a2 == 1 and a1 + a2 == 3
    assert a2 == ALPHA_N3[1]
    assert a2 * a2 == (7 + 3 * QuadScalar.sqrt(5)) / 2


@pytest.mark.parametrize("n", [3, 4, 5])
def test_recurrence_and_closed_form(n):
    ms = hyperboloid_multiplicities(n, 12)
    for l in range(1, 12):
        assert ms[l + 1] == (n * n - 2) * ms[l] - ms[l - 1]
    assert ms == [multiplicity_closed_form(n, l) for l in range(13)]


def test_multiplicities_match_schur_dims(n3):
    ms = hyperboloid_multiplicities(3, 2)
    assert ms == [1, schur_dim(n3, (2,)), schur_dim(n3, (4,))]


def test_hyperboloid_rejects_classical():
    with pytest.raises(SpectrumError):
        hyperboloid_spectrum(2, 3)


@given(st.fractions(min_value=0, max_value=200))
@settings(max_examples=60)
def test_count_N_is_monotone_step(lam):
    t = hyperboloid_spectrum(3, 10)
    N = count_N(t, lam)
    assert N == sum(r.multiplicity for r in t.rows if r.eigenvalue <= lam)
    assert count_N(t, lam + Fraction(1, 3)) >= N


def test_count_N_range():
    t = hyperboloid_spectrum(3, 3)
    assert count_N(t, 4) == 9 and count_N(t, Fraction(39, 10)) == 1
    with pytest.raises(SpectrumError):
        count_N(t, 25)


def test_cpn_rank_two_is_hyperboloid():
    cpn = orbit_spectrum_cpn(2, e=[1, 3, 1], L=5)
    hyp = hyperboloid_spectrum(3, 5)
    assert [(r.eigenvalue, r.multiplicity) for r in cpn.rows] == \
        [(r.eigenvalue, r.multiplicity) for r in hyp.rows]
    alpha = orbit_spectrum_cpn(2, alpha=ALPHA_N3, L=5)
    assert alpha.cumulative() == cpn.cumulative()


def test_cpn_glued():
    t = orbit_spectrum_cpn(4, e=[1, 5, 8, 5, 1], L=3)
    assert [(int(r.eigenvalue), r.multiplicity) for r in t.rows] == [(0, 1), (8, 24), (20, 264),
                                                                      (36, 2211)]


def test_cpn_classical_projective_space():
    # classical CP^2: multiplicities are dims of the (2k, k) representations of sl_3
    t = orbit_spectrum_cpn(3, e=[1, 3, 3, 1], L=3)
    assert [r.multiplicity for r in t.rows] == [1, 8, 27, 64]


def test_cpn_errors():
    with pytest.raises(SpectrumError):
        orbit_spectrum_cpn(2, alpha=[2, 2])
    with pytest.raises(SpectrumError):
        orbit_spectrum_cpn(1, e=[1, 1])


def test_weyl_fit_L40():
    rep = weyl_fit(hyperboloid_spectrum(3, 41), 40)
    assert rep.rel_change_at < 1e-3 and rep.rel_change_below < 1e-3
    assert rep.ratio_rel_error < 0.01
    assert abs(rep.expected_ratio - (7 + 3 * math.sqrt(5)) / 2) < 1e-9
    assert rep.growth_rel_error < 0.01
    assert rep.cauchy_from_10
    assert rep.beta_inf < rep.beta_sup


def test_weyl_fit_needs_data():
    with pytest.raises(SpectrumError):
        weyl_fit(hyperboloid_spectrum(3, 8))


def test_csv():
    text = table_csv(hyperboloid_spectrum(3, 2))
    lines = text.splitlines()
    assert lines[0] == "l,eigenvalue,multiplicity,N,r_at,r_below"
    assert lines[1].startswith("0,0,1,1,1,")
    assert lines[-1].endswith(",")
