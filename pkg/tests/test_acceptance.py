"""Acceptance criteria 1 to 13, one test each.

Every test records a PASS or FAIL line that is printed in the terminal
summary, then asserts.
"""
import math
import random
import time
from fractions import Fraction

import pytest

from swlab.exactnum import Matrix, QuadScalar, mat_rank
from swlab.fusion import dim_check, fuse
from swlab.poincare import (centrality, determinant_pair, dual_report, dual_tensors, mn_report,
                            poincare_series)
from swlab.schurweyl import (character, contents, enumerate_partitions, gamma, hook_dim,
                             induced_symmetry, isotypic_dim, schur_dim, schur_poly, shift,
                             young_symmetrizer)
from swlab.spectra import hyperboloid_spectrum, weyl_fit
from swlab.symmetry import build_rank2, skew_diagonal_n3, verify_matrix
from swlab.twistlie import (act_on_det, casimir_eigenvalue, casimir_matrix,
                            casimir_on_component, casimir_sl_eigenvalue, crossings, lie_data,
                            random_coefficients, trace_det)

from conftest import ACCEPTANCE, ALPHA_N3


def record(number, ok, detail):
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE.append(line)
    print(line)
    assert ok, line


def test_criterion_01_axioms():
    start = time.perf_counter()
    reports = [verify_matrix(build_rank2(*skew_diagonal_n3(1, 1, branch)).S, 3)
               for branch in ("plus", "minus")]
    elapsed = time.perf_counter() - start
    ok = all(r.involutive and r.qybe and r.remark21_conjugation for r in reports)
    record(1, ok and elapsed < 1.0, f"both branches exact, {elapsed:.2f}s")


def test_criterion_02_poincare(n3, glued):
    data = poincare_series(n3, 5)
    ok = data.minus_coeffs[:3] == [1, 3, 1] and all(c == 0 for c in data.minus_coeffs[3:])
    ok = ok and data.plus_coeffs == [1, 3, 8, 21, 55, 144] and data.pp_holds
    gdata = poincare_series(glued, 4, plus_K=2)
    ok_glued = gdata.minus_coeffs == [1, 5, 8, 5, 1]
    record(2, ok and ok_glued, f"minus {data.minus_coeffs[:3]}, plus {data.plus_coeffs}, "
                               f"glued {gdata.minus_coeffs}")


def test_criterion_03_determinant(n3):
    dp = determinant_pair(n3)
    mn = mn_report(n3, dp)
    cen = centrality(n3)
    duals = dual_tensors(n3)
    quarter = Matrix.identity(3).scale(Fraction(1, 4))
    checks = {
        "u.v=1": dp.contraction() == 1,
        "MN=Id/4": mn.M @ mn.N == quarter and mn.prod_ok,
        "central": cen.central,
        "trace=2": duals.trace == 2,
        "BC=Id": duals.B @ duals.C == Matrix.identity(3),
    }
    record(3, all(checks.values()), ", ".join(f"{k} {v}" for k, v in checks.items()))


def test_criterion_04_schur_dimensions(n3):
    start = time.perf_counter()
    bad = []
    count = 0
    for m in range(1, 6):
        for lam in enumerate_partitions(m):
            count += 1
            if schur_dim(n3, lam) != schur_poly(lam, ALPHA_N3):
                bad.append(lam)
    named = {(2,): 8, (1, 1): 1, (1, 1, 1): 0, (4,): 55, (2, 1): 3}
    named_ok = all(schur_dim(n3, lam) == d for lam, d in named.items())
    # the structured projector has the image of the group-algebra symmetrizer
    naive_ok = all(schur_dim(n3, lam) == mat_rank(young_symmetrizer(lam).represent(n3))
                   for lam in [(2, 1), (3,), (2, 2)])
    elapsed = time.perf_counter() - start
    record(4, not bad and named_ok and naive_ok and elapsed < 120,
           f"{count} partitions, mismatches {bad}, {elapsed:.1f}s")


def test_criterion_05_isotypic(n3):
    bad = []
    sums = {}
    for m in range(1, 5):
        total = 0
        for lam in enumerate_partitions(m):
            iso = isotypic_dim(n3, lam)
            if iso != schur_dim(n3, lam) * hook_dim(lam):
                bad.append(lam)
            total += iso
        sums[m] = total
    ok = not bad and all(sums[m] == 3 ** m for m in sums)
    record(5, ok, f"sums {sums}, mismatches {bad}")


def test_criterion_06_gamma():
    bad = []
    for m in range(1, 9):
        transposition = (2,) + (1,) * (m - 2)
        for lam in enumerate_partitions(m):
            content_sum = sum(contents(lam))
            via_characters = Fraction(m * (m - 1), 2) * character(lam, transposition) \
                / hook_dim(lam) if m > 1 else Fraction(0)
            if not (gamma(lam) == content_sum == via_characters):
                bad.append(lam)
    record(6, not bad, f"all partitions up to weight 8, mismatches {bad}")


def test_criterion_07_fusion():
    res = fuse((2,), (2,), 2)
    raw_ok = set(res.raw) == {(4,), (3, 1), (2, 2)}
    reduced_ok = res.terms == {(4,): 1, (2,): 1, (): 1}
    chk = dim_check((2,), (2,), 2, alpha=ALPHA_N3)
    identity_ok = chk.dim_product == 64 and chk.dim_sum == 64 and \
        schur_poly((4,), ALPHA_N3) == 55
    parts = [l for m in range(1, 5) for l in enumerate_partitions(m) if len(l) <= 2]
    failures = [(a, b) for a in parts for b in parts
                if not dim_check(a, b, 2, alpha=ALPHA_N3).consistent]
    record(7, raw_ok and reduced_ok and identity_ok and not failures,
           f"raw {sorted(res.raw)}, reduced {sorted(res.terms)}, 64 = 55 + 8 + 1, "
           f"{len(parts) ** 2} pairs checked")


def test_criterion_08_casimir(n3):
    p = 2
    bad = []
    for m in range(1, 5):
        for lam in enumerate_partitions(m):
            if len(lam) > p:
                continue
            if casimir_on_component(n3, lam, p) != casimir_eigenvalue(lam, p):
                bad.append(lam)
    low_ok = casimir_matrix(n3, 1) == Matrix.identity(3).scale(p) and \
        casimir_matrix(n3, 2) == Matrix.identity(9).scale(2 * p) + n3.S.scale(2)
    special_ok = all(casimir_eigenvalue((m,), q) == m * q + m * (m - 1) and
                     casimir_eigenvalue((1,) * m, max(q, m)) == m * max(q, m) - m * (m - 1)
                     for m in range(1, 7) for q in (2, 3))
    shift_bad = []
    for q in (2, 3, 4):
        for m in range(1, 7):
            for lam in enumerate_partitions(m):
                if len(lam) <= q and casimir_sl_eigenvalue(shift(lam, 1, q), q) != \
                        casimir_sl_eigenvalue(lam, q):
                    shift_bad.append((q, lam))
    record(8, not bad and low_ok and special_ok and not shift_bad,
           f"scalar mismatches {bad}, low degrees {low_ok}, special cases {special_ok}, "
           f"shift failures {shift_bad}")


def test_criterion_09_det_action(n3):
    n = 3
    sl_ok = True
    for i in range(n):
        for j in range(n):
            a = [[Fraction(int(r == i and c == j)) for c in range(n)] for r in range(n)]
            t = trace_det(n3, a)
            f = [[a[r][c] - (t if r == c else 0) for c in range(n)] for r in range(n)]
            sl_ok = sl_ok and act_on_det(n3, f) == 0
    rng = random.Random(2024)
    random_ok = all(act_on_det(n3, a) == trace_det(n3, a) * 2
                    for a in (random_coefficients(n, rng) for _ in range(20)))
    record(9, sl_ok and random_ok, f"sl basis to zero {sl_ok}, 20 random p*tr_det {random_ok}")


def test_criterion_10_spectrum(n3):
    table = hyperboloid_spectrum(3, 3)
    rows = [(int(r.eigenvalue), r.multiplicity) for r in table.rows]
    ms = [r.multiplicity for r in hyperboloid_spectrum(3, 12).rows]
    rec_ok = all(ms[l + 1] == 7 * ms[l] - ms[l - 1] for l in range(1, 12))
    brute = [1, schur_dim(n3, (2,)), schur_dim(n3, (4,))]
    ok = rows == [(0, 1), (4, 8), (12, 55), (24, 377)] and \
        table.cumulative() == [1, 9, 64, 441] and rec_ok and brute == ms[:3]
    record(10, ok, f"rows {rows}, N {table.cumulative()}, brute force {brute}")


def test_criterion_11_weyl():
    start = time.perf_counter()
    rep = weyl_fit(hyperboloid_spectrum(3, 41), 40)
    elapsed = time.perf_counter() - start
    expected = (7 + 3 * math.sqrt(5)) / 2
    ok = rep.rel_change_at < 1e-3 and rep.rel_change_below < 1e-3 and \
        rep.ratio_rel_error < 0.01 and abs(rep.expected_ratio - expected) < 1e-9 and \
        rep.growth_rel_error < 0.01 and elapsed < 1.0
    record(11, ok, f"ratio error {rep.ratio_rel_error:.2e}, stabilization "
                   f"{rep.rel_change_at:.1e}/{rep.rel_change_below:.1e}, growth error "
                   f"{rep.growth_rel_error:.2%}, {elapsed:.2f}s")


def test_criterion_12_lie(n3):
    start = time.perf_counter()
    ext = crossings(n3)
    data = lie_data(n3, ext)
    elapsed = time.perf_counter() - start
    axioms = ["skew", "invariance_right", "invariance_left", "jacobi", "trace_of_bracket",
              "trace_id_equals_rank", "sl_traceless", "f_ii_zero"]
    ok = all(data.checks[k] for k in axioms) and ext.ok() and ext.report.qybe
    record(12, ok and elapsed < 30, f"axioms {ok}, pairing {ext.pairing_invariant}, "
                                    f"block braid {ext.report.qybe}, {elapsed:.1f}s")


def test_criterion_13_root_probe(n3):
    _, rep = induced_symmetry(n3, (2,))
    out = rep.to_json()
    emitted = rep.closes and len(out["roots"]) > 0 and len(out["weights"]) > 0 and \
        isinstance(out["agree"], bool)
    verdict = "agree" if rep.agree else "disagree"
    record(13, emitted, f"induced roots {[round(x, 6) for x in out['roots']]}, classical "
                        f"weights {[round(x, 6) for x in out['weights']]}, verdict {verdict}")
