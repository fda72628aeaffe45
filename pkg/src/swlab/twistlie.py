"""Crossings with the dual space, the twisted Lie algebras gl(V_S) and
sl(V_S), and the Casimir operator.

Conventions.  ``V*`` has the basis ``y^j`` with the invariant pairing
``<y^j, x_i> = delta``.  The crossing ``S_{VV*}`` sends ``x_a (x) y^b`` to
``sum T[(c,d),(a,b)] y^c (x) x_d`` where ``T`` is the column inverse; this is
exactly what transporting ``x_a`` across an invariant pair requires.
``End V = V (x) V*`` with ``e_i^j = x_i (x) y^j`` (flattened as ``i*n + j``),
and the trace is ``<,> o S_{VV*}``.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product

import numpy as np

from .exactnum import Matrix, QuadScalar, kron, linear_solve
from .poincare import coset_operator, determinant_pair, dual_tensors, projector, rank_of
from .schurweyl import gamma, normalize, schur_basis
from .symmetry import Permutation, Symmetry, verify_matrix


class CrossingError(ValueError):
    """The dual crossings are missing or not unique."""


class LieAxiomError(ArithmeticError):
    pass


def _zero(M: Matrix) -> bool:
    return M.is_zero() if M.is_exact else M.is_zero(M.tol)


def _column_reindex(X: Matrix, n: int) -> Matrix:
    """``R[(l,e),(c,d)] = X[(c,l),(d,e)]``."""
    N = n * n
    ent = X.entries()
    rows = [[None] * N for _ in range(N)]
    for c, d, l, e in product(range(n), repeat=4):
        rows[l * n + e][c * n + d] = ent[(c * n + l) * N + d * n + e]
    if not X.is_exact:
        return Matrix.from_float(np.array(rows, dtype=float))
    return Matrix.from_rows(rows)


def _unique_solve(A: Matrix, what: str) -> Matrix:
    sol = linear_solve(A, Matrix.identity(A.rows, A.mode))
    if not sol.consistent:
        raise CrossingError(f"no solution for {what}")
    if not sol.unique:
        raise CrossingError(f"{what} is not unique (kernel dim {len(sol.kernel)})")
    return sol.particular


def _eye(n, mode):
    return Matrix.identity(n, mode)


@dataclass
class ExtendedSymmetry:
    n: int
    S_VV: Matrix
    S_VVd: Matrix    # V (x) V*  ->  V* (x) V
    S_VdV: Matrix    # V* (x) V  ->  V (x) V*
    S_VdVd: Matrix   # V* (x) V* -> V* (x) V*
    block: Matrix    # on (V + V*)^(x)2, V first
    report: object
    pairing_invariant: bool
    coevaluation_invariant: bool

    @property
    def mode(self):
        return self.S_VV.mode

    def S_End(self) -> Matrix:
        """Crossing of ``End V`` with itself on ``V (x) V* (x) V (x) V*``.

        Moving ``a (x) b`` past ``c (x) d``: first ``b`` past ``c``, then ``a``
        past ``c`` and ``b`` past ``d``, finally ``a`` past ``d``.
        """
        n, mode = self.n, self.mode
        I = _eye(n, mode)
        step1 = kron(kron(I, self.S_VdV), I)
        step2 = kron(self.S_VV, self.S_VdVd)
        step3 = kron(kron(I, self.S_VVd), I)
        return step3 @ step2 @ step1

    def ok(self) -> bool:
        return self.report.ok and self.pairing_invariant and self.coevaluation_invariant


def _block_operator(n, S_VV, S_VVd, S_VdV, S_VdVd) -> Matrix:
    """Assemble the operator on ``W (x) W`` with ``W = V + V*``."""
    W = 2 * n
    exact = S_VV.is_exact
    rows = [[0] * (W * W) for _ in range(W * W)]
    # (source block pair, target block pair, matrix)
    parts = [((0, 0), (0, 0), S_VV), ((0, 1), (1, 0), S_VVd),
             ((1, 0), (0, 1), S_VdV), ((1, 1), (1, 1), S_VdVd)]
    for (s1, s2), (t1, t2), M in parts:
        ent = M.entries()
        for a, b, c, d in product(range(n), repeat=4):
            val = ent[(c * n + d) * n * n + a * n + b]
            r = (t1 * n + c) * W + (t2 * n + d)
            col = (s1 * n + a) * W + (s2 * n + b)
            rows[r][col] = val
    if exact:
        zero = QuadScalar(0)
        return Matrix.from_rows([[x if x != 0 else zero for x in row] for row in rows])
    return Matrix.from_float(np.array(rows, dtype=float))


def crossings(S: Symmetry) -> ExtendedSymmetry:
    """Solve for the mixed crossings and verify the assembled operator."""
    if "crossings" in S.cache:
        return S.cache["crossings"]
    n, mode = S.n, S.mode
    duals = dual_tensors(S)
    S_VVd = duals.T
    S_VdV = _unique_solve(S_VVd, "S_{V*V}")
    # transporting y^a across an invariant pair fixes S_{V*V*} the same way
    S_VdVd = _unique_solve(_column_reindex(S_VdV, n), "S_{V*V*}")
    block = _block_operator(n, S.S, S_VVd, S_VdV, S_VdVd)
    report = verify_matrix(block, 2 * n)
    I = _eye(n, mode)
    pair = _pairing_row(n, mode)
    # <,>^{12} S^{23} S^{12} = <,>^{23} on V (x) V* (x) V
    lhs = kron(pair, I) @ kron(I, S.S) @ kron(S_VVd, I)
    rhs = kron(I, pair)
    pairing_ok = _zero(lhs - rhs)
    # sum_i x_i (x) y^i is transported unchanged past x_a, in both directions
    coev = _coevaluation(n, mode)
    right = kron(I, S_VVd) @ kron(S.S, I) @ kron(I, coev)
    left = kron(S.S, I) @ kron(I, S_VdV) @ kron(coev, I)
    coev_ok = _zero(right - kron(coev, I)) and _zero(left - kron(I, coev))
    ext = ExtendedSymmetry(n, S.S, S_VVd, S_VdV, S_VdVd, block, report, pairing_ok, coev_ok)
    S.cache["crossings"] = ext
    return ext


def _pairing_row(n, mode) -> Matrix:
    """``<y^c, x_k> = delta`` as a 1 x n^2 row on ``V* (x) V``."""
    vals = [1 if c == k else 0 for c in range(n) for k in range(n)]
    return Matrix.from_rows([vals]) if mode == "exact" else Matrix.from_float(np.array([vals], float))


def _coevaluation(n, mode) -> Matrix:
    """``sum_i x_i (x) y^i`` as a column on ``V (x) V*``."""
    vals = [[1 if i == j else 0] for i in range(n) for j in range(n)]
    return Matrix.from_rows(vals) if mode == "exact" else Matrix.from_float(np.array(vals, float))


# Lie data -------------------------------------------------------------------------

@dataclass
class LieData:
    n: int
    p: int
    composition: Matrix     # n^2 x n^4, (e (x) e) -> e
    bracket: Matrix         # composition o (Id - S_End)
    S_End: Matrix
    trace: Matrix           # 1 x n^2 row, tr(e_i^j)
    trace_matrix: Matrix    # n x n, [i][j] = tr(e_i^j)
    sl_basis: list          # columns f_i^j in the e basis
    checks: dict = field(default_factory=dict)

    def identity(self) -> Matrix:
        vals = [[1 if i == j else 0] for i in range(self.n) for j in range(self.n)]
        return Matrix.from_rows(vals) if self.bracket.is_exact else \
            Matrix.from_float(np.array(vals, float))

    def element(self, a) -> Matrix:
        """Column of ``sum a[i][j] e_i^j``."""
        vals = [[a[i][j]] for i in range(self.n) for j in range(self.n)]
        return Matrix.from_rows(vals) if self.bracket.is_exact else \
            Matrix.from_float(np.array(vals, float))

    def bracket_of(self, X: Matrix, Y: Matrix) -> Matrix:
        return self.bracket @ kron(X, Y)

    def to_json(self) -> dict:
        return {"n": self.n, "p": self.p, "checks": dict(self.checks)}


def _composition(n, mode) -> Matrix:
    N = n * n
    rows = [[0] * (N * N) for _ in range(N)]
    for i, j, l in product(range(n), repeat=3):
        # e_i^j o e_j^l = e_i^l
        rows[i * n + l][(i * n + j) * N + j * n + l] = 1
    return Matrix.from_rows(rows) if mode == "exact" else Matrix.from_float(np.array(rows, float))


def lie_data(S: Symmetry, ext: ExtendedSymmetry | None = None, duals=None,
             check_jacobi: bool = True) -> LieData:
    """Structure of ``gl(V_S)`` with bracket ``o (Id - S_End)``; runs the
    skew-symmetry, invariance, Jacobi and trace checks and raises on failure."""
    n, mode = S.n, S.mode
    ext = ext or crossings(S)
    duals = duals or dual_tensors(S)
    p = rank_of(S)
    N = n * n
    SE = ext.S_End()
    I_N = _eye(N, mode)
    mu = _composition(n, mode)
    br = mu @ (kron(I_N, I_N) - SE)
    # tr = <,> o S_{VV*}
    tr = _pairing_row(n, mode) @ ext.S_VVd
    tr_rows = [[tr[0, i * n + j] for j in range(n)] for i in range(n)]
    tr_mat = Matrix.from_rows(tr_rows) if mode == "exact" else Matrix.from_float(np.array(tr_rows, float))
    checks = {}
    checks["s_end_involutive"] = _zero(SE @ SE - kron(I_N, I_N))
    checks["skew"] = _zero(br @ (kron(I_N, I_N) + SE))
    checks["trace_of_bracket"] = _zero(tr @ br)
    # invariance: S (a (x) [b,c]) = ([,] (x) Id) S^{23} S^{12} (a (x) b (x) c)
    S12 = kron(SE, I_N)
    S23 = kron(I_N, SE)
    checks["invariance_right"] = _zero(SE @ kron(I_N, br) - kron(br, I_N) @ S23 @ S12)
    checks["invariance_left"] = _zero(SE @ kron(br, I_N) - kron(I_N, br) @ S12 @ S23)
    if check_jacobi:
        J = br @ kron(br, I_N)
        checks["jacobi"] = _zero(J + J @ S12 @ S23 + J @ S23 @ S12)
    Id = Matrix.column([1 if i == j else 0 for i in range(n) for j in range(n)]) if mode == "exact" \
        else Matrix.from_float(np.eye(n).reshape(-1, 1))
    tr_id = (tr @ Id)[0, 0]
    checks["trace_id_equals_rank"] = (tr_id == p) if mode == "exact" else abs(tr_id - p) < 1e-9
    checks["trace_is_B"] = _zero(tr_mat - duals.B)
    checks["trace_is_C"] = _zero(tr_mat - duals.C)
    # f_i^j = e_i^j - tr(e_i^j)/p Id
    inv_p = QuadScalar(1, 0, p) if mode == "exact" else 1.0 / p
    sl = []
    for i, j in product(range(n), repeat=2):
        e = [[0] * n for _ in range(n)]
        e[i][j] = 1
        col = Matrix.column([e[a][b] for a in range(n) for b in range(n)]) if mode == "exact" \
            else Matrix.from_float(np.array(e, float).reshape(-1, 1))
        sl.append(col - Id.scale(tr_rows[i][j] * inv_p))
    fsum = sl[0]
    for i in range(1, n):
        fsum = fsum + sl[i * n + i]
    checks["f_ii_zero"] = _zero(fsum)
    checks["sl_traceless"] = all(_zero(tr @ f) for f in sl)
    hard = ["s_end_involutive", "skew", "trace_of_bracket", "invariance_right",
            "invariance_left", "jacobi", "trace_id_equals_rank", "f_ii_zero", "sl_traceless"]
    failed = [k for k in hard if k in checks and not checks[k]]
    if failed:
        raise LieAxiomError(f"twisted Lie axioms fail: {', '.join(failed)}")
    return LieData(n, p, mu, br, SE, tr, tr_mat, sl, checks)


# Casimir ------------------------------------------------------------------------------

def casimir_matrix(S: Symmetry, m: int, p: int | None = None) -> Matrix:
    """``m p Id + 2 sum_{i<j} rho_S((i j))`` on ``T^m(V)``."""
    p = rank_of(S) if p is None else p
    S.check_cap(m)
    out = S.identity(m).scale(m * p)
    for i, j in combinations(range(1, m + 1), 2):
        out = out + S.rho(m, Permutation.transposition(m, i, j)).scale(2)
    return out


def casimir_on_component(S: Symmetry, lam, p: int | None = None):
    """Scalar by which the Casimir acts on ``V_lambda``; raises if the
    restriction is not scalar."""
    lam = normalize(lam)
    p = rank_of(S) if p is None else p
    m = sum(lam)
    if m == 0:
        return QuadScalar(0) if S.S.is_exact else 0.0
    C = casimir_matrix(S, m, p)
    B = schur_basis(S, lam)
    if B.cols == 0:
        raise ValueError(f"V_{lam} is zero")
    CB = C @ B
    # read the scalar off one nonzero coordinate, then check all of it
    r = next(r for r in range(B.rows) if B[r, 0] != 0) if B.is_exact else \
        int(np.argmax(np.abs(B.to_numpy()[:, 0])))
    c = CB[r, 0] / B[r, 0]
    if not _zero(CB - B.scale(c)):
        raise LieAxiomError(f"Casimir is not scalar on V_{lam}")
    return c


def casimir_eigenvalue(lam, p: int) -> Fraction:
    """``m p + 2 gamma_lambda``."""
    lam = normalize(lam)
    return sum(lam) * p + 2 * gamma(lam)


def casimir_sl_eigenvalue(lam, p: int) -> Fraction:
    """``m p + 2 gamma_lambda - m^2 / p``."""
    if p < 2:
        raise ValueError("p must be at least 2")
    lam = normalize(lam)
    m = sum(lam)
    return Fraction(m * p) + 2 * gamma(lam) - Fraction(m * m, p)


def act_on_det(S: Symmetry, a):
    """Scalar ``c`` with ``X(v) = c v`` for ``X = a_i^j e_j^i``, where ``X``
    acts on ``T^p(V)`` through ``P_-^p Q (X (x) Id)`` and ``v`` is the
    determinant.  Raises if the result is not proportional to ``v``."""
    det = determinant_pair(S)
    p, n = det.p, S.n
    # X(x_i) = a_i^j x_j: column i holds a[i][*]
    rows = [[a[i][j] for i in range(n)] for j in range(n)]
    X = Matrix.from_rows(rows) if S.S.is_exact else Matrix.from_float(np.array(rows, float))
    lifted = kron(X, S.identity(p - 1)) if p > 1 else X
    w = projector(S, p, "-") @ (coset_operator(S, p, -1) @ (lifted @ det.v))
    c = (det.u.T @ w)[0, 0]
    if not _zero(w - det.v.scale(c)):
        raise LieAxiomError("X(v) is not proportional to v")
    return c


def trace_det(S: Symmetry, a):
    """``sum C_det[i][j] a[i][j]``."""
    Cdet = dual_tensors(S).Cdet
    n = S.n
    acc = QuadScalar(0) if S.S.is_exact else 0.0
    for i, j in product(range(n), repeat=2):
        acc = acc + Cdet[i, j] * a[i][j]
    return acc


def random_coefficients(n: int, rng: random.Random, lo: int = -5, hi: int = 5):
    return [[rng.randint(lo, hi) for _ in range(n)] for _ in range(n)]
