"""Poincare series of the (skew-)symmetric algebras of a symmetry, the
determinant/codeterminant pair, the commutation matrices M and N, and the
column-inverse tensor T with its contractions C and B.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

import flint
import numpy as np

from .exactnum import Matrix, QuadScalar, linear_solve, mat_rank
from .symmetry import Symmetry

# above this tensor dimension the projector image is grown column by column
# instead of forming the dense projector
DENSE_LIMIT = 729


class PoincareError(ValueError):
    pass


# projectors -----------------------------------------------------------------

def coset_operator(S: Symmetry, k: int, sign: int) -> Matrix:
    """``sum_j (+-1)^(j-1) S^{j-1,j} ... S^{12}`` on ``T^k(V)``.

    These are the images of coset representatives of ``S(k)`` modulo the
    stabiliser of the first slot, so that
    ``P^k = (1/k) Q_k (Id (x) P^{k-1})``.
    """
    out = S.identity(k)
    chain = S.identity(k)
    for j in range(2, k + 1):
        chain = S.local(k, j - 1) @ chain
        out = out + (chain if sign > 0 or j % 2 else -chain)
    return out


def projector(S: Symmetry, k: int, sign: str | int = "-") -> Matrix:
    """``P_+-^k = (1/k!) sum_pi (+-1)^pi rho_S(pi)`` as a dense matrix."""
    sgn = _sign(sign)
    key = ("projector", k, sgn)
    if key in S.cache:
        return S.cache[key]
    if k < 1:
        raise ValueError("k must be >= 1")
    S.check_cap(k)
    if k == 1:
        P = S.identity(1)
    else:
        prev = projector(S, k - 1, sgn)
        lifted = _kron_identity_left(prev, S.n)
        P = (coset_operator(S, k, sgn) @ lifted).scale(QuadScalar(1, 0, k))
    S.cache[key] = P
    return P


def projector_naive(S: Symmetry, k: int, sign: str | int = "-") -> Matrix:
    """Group average over all of S(k); reference for :func:`projector`."""
    from .symmetry import Permutation

    sgn = _sign(sign)
    out = None
    for perm in Permutation.all(k):
        term = S.rho(k, perm)
        if sgn < 0 and perm.sign() < 0:
            term = -term
        out = term if out is None else out + term
    return out.scale(QuadScalar(1, 0, math.factorial(k)))


def _sign(sign) -> int:
    if sign in ("+", 1, "plus"):
        return 1
    if sign in ("-", -1, "minus"):
        return -1
    raise ValueError(f"sign must be '+' or '-', got {sign!r}")


def _kron_identity_left(P: Matrix, n: int) -> Matrix:
    """``Id_n (x) P``."""
    N = P.rows
    if not P.is_exact:
        return Matrix.from_float(np.kron(np.eye(n), P.arr))
    size = n * N
    re = flint.fmpq_mat(size, size)
    ir = flint.fmpq_mat(size, size) if P.ir is not None else None
    pre = P.re.entries()
    pir = P.ir.entries() if P.ir is not None else None
    for r in range(N):
        for c in range(N):
            a = pre[r * N + c]
            b = pir[r * N + c] if pir is not None else 0
            if a == 0 and b == 0:
                continue
            for blk in range(n):
                if a != 0:
                    re[blk * N + r, blk * N + c] = a
                if b != 0:
                    ir[blk * N + r, blk * N + c] = b
    return Matrix(size, size, re=re, ir=ir, d=P.d)


# thin (column-basis) arithmetic on tensor powers ------------------------------

class _Thin:
    """Columns of a subspace of T^m(V) as object arrays of flint.fmpq
    (or float arrays), shape ``(n,)*m + (r,)``; exact values are
    ``re + ir*sqrt(d)``."""

    def __init__(self, re, ir, d, exact):
        self.re, self.ir, self.d, self.exact = re, ir, d, exact

    @property
    def m(self):
        return self.re.ndim - 1

    @property
    def r(self):
        return self.re.shape[-1]

    def to_matrix(self) -> Matrix:
        N = int(np.prod(self.re.shape[:-1]))
        if not self.exact:
            return Matrix.from_float(self.re.reshape(N, self.r))
        re = flint.fmpq_mat(N, self.r, list(self.re.reshape(-1)))
        ir = flint.fmpq_mat(N, self.r, list(self.ir.reshape(-1))) if self.d else None
        return Matrix(N, self.r, re=re, ir=ir, d=self.d)

    @classmethod
    def from_matrix(cls, M: Matrix, n: int, m: int) -> _Thin:
        shape = (n,) * m + (M.cols,)
        if not M.is_exact:
            return cls(M.arr.reshape(shape), None, 0, False)
        re = np.empty(M.rows * M.cols, dtype=object)
        re[:] = M.re.entries()
        ir = np.empty(M.rows * M.cols, dtype=object)
        ir[:] = M._ir().entries()
        return cls(re.reshape(shape), ir.reshape(shape), M.d, True)


def _tensor4(S: Symmetry):
    """``S`` as an object/float array ``A[k, l, i, j]`` (output first)."""
    n = S.n
    if not S.S.is_exact:
        return S.S.arr.reshape(n, n, n, n), None
    re = np.empty(n ** 4, dtype=object)
    re[:] = S.S.re.entries()
    ir = np.empty(n ** 4, dtype=object)
    ir[:] = S.S._ir().entries()
    return re.reshape(n, n, n, n), ir.reshape(n, n, n, n)


def _apply_local(S: Symmetry, X: _Thin, i: int) -> _Thin:
    """``S^{i,i+1} X`` without forming the n^m x n^m operator (1-based ``i``)."""
    Are, Air = S.cache.setdefault("tensor4", _tensor4(S))
    ax = [i - 1, i]

    def td(A, B):
        out = np.tensordot(A, B, axes=([2, 3], ax))
        # tensordot puts the two new axes first; move them back into slots i-1, i
        return np.moveaxis(out, [0, 1], ax)

    if not X.exact:
        return _Thin(td(Are, X.re), None, 0, False)
    d = X.d or S.d
    re = td(Are, X.re)
    ir = td(Are, X.ir)
    if S.d:
        re = re + td(Air, X.ir) * d
        ir = ir + td(Air, X.re)
    return _Thin(re, ir, d, True)


def _lift(X: _Thin, n: int) -> _Thin:
    """Columns of ``V (x) X``: every basis vector x_a tensored with every column."""
    shape = X.re.shape
    r = X.r
    zero = flint.fmpq(0) if X.exact else 0.0

    def grow(A):
        out = np.empty((n,) + shape[:-1] + (n * r,), dtype=object if X.exact else float)
        out[...] = zero
        for a in range(n):
            out[a, ..., a * r:(a + 1) * r] = A
        return out

    return _Thin(grow(X.re), grow(X.ir) if X.exact else None, X.d, X.exact)


def _independent(X: _Thin) -> _Thin:
    """Keep a column basis of X."""
    from .exactnum import column_space

    M = X.to_matrix()
    if M.cols == 0:
        return X
    B = column_space(M)
    return _Thin.from_matrix(B, X.re.shape[0], X.m)


def image_basis(S: Symmetry, k: int, sign) -> Matrix:
    """Column basis of ``Im P_+-^k`` grown from ``V (x) Im P^{k-1}``."""
    sgn = _sign(sign)
    key = ("image", k, sgn)
    if key in S.cache:
        return S.cache[key]
    n = S.n
    if k == 1:
        B = S.identity(1)
    elif n ** k <= DENSE_LIMIT:
        from .exactnum import column_space

        B = column_space(projector(S, k, sgn))
    else:
        prev = _Thin.from_matrix(image_basis(S, k - 1, sgn), n, k - 1)
        X = _lift(prev, n)
        acc, chain = X, X
        for j in range(2, k + 1):
            chain = _apply_local(S, chain, j - 1)
            if sgn > 0 or j % 2:
                acc = _Thin(acc.re + chain.re, acc.ir + chain.ir if acc.exact else None,
                            acc.d or chain.d, acc.exact)
            else:
                acc = _Thin(acc.re - chain.re, acc.ir - chain.ir if acc.exact else None,
                            acc.d or chain.d, acc.exact)
        B = _independent(acc).to_matrix() if acc.r else acc.to_matrix()
    S.cache[key] = B
    return B


def wedge_dim(S: Symmetry, k: int, sign) -> int:
    if k == 0:
        return 1
    B = image_basis(S, k, sign)
    return B.cols if B.cols == 0 else mat_rank(B)


# traces of cycles ------------------------------------------------------------

def _partial_trace_first(X: Matrix, n: int) -> Matrix:
    """``tr_1`` of an operator on ``V (x) V``."""
    rows = [[sum((X[a * n + k, a * n + l] for a in range(n)), QuadScalar(0))
             if X.is_exact else sum(X[a * n + k, a * n + l] for a in range(n))
             for l in range(n)] for k in range(n)]
    return Matrix.from_rows(rows) if X.is_exact else Matrix.from_float(np.array(rows))


def cycle_traces(S: Symmetry, K: int) -> list:
    """``t_r = tr rho_S(r-cycle)`` on ``T^r(V)`` for ``r = 1..K``.

    Uses ``tr(S^{12} ... S^{r-1,r}) = tr(A_r)`` with ``A_1 = Id`` and
    ``A_{j+1} = tr_1[(A_j (x) Id) S]``, so only n^2 x n^2 matrices appear.
    """
    from .exactnum import kron

    n = S.n
    A = Matrix.identity(n, S.mode)
    out = [A.trace()]
    I = Matrix.identity(n, S.mode)
    for _ in range(2, K + 1):
        A = _partial_trace_first(kron(A, I) @ S.S, n)
        out.append(A.trace())
    return out


def _partitions(m: int, maxpart: int | None = None):
    if maxpart is None:
        maxpart = m
    if m == 0:
        yield ()
        return
    for first in range(min(m, maxpart), 0, -1):
        for rest in _partitions(m - first, first):
            yield (first,) + rest


def z_mu(mu) -> int:
    """Centralizer order of the class of cycle type ``mu``."""
    out = 1
    for part in set(mu):
        c = mu.count(part)
        out *= part ** c * math.factorial(c)
    return out


def trace_wedge_dims(S: Symmetry, K: int) -> tuple[list, list]:
    """``dim wedge^k_+-`` as traces of the idempotents ``P_+-^k``, via cycle traces.

    Independent of the projector-rank route: uses only class sums.
    """
    t = cycle_traces(S, max(K, 1))
    exact = S.S.is_exact
    if exact:
        t = [QuadScalar.coerce(x) for x in t]
        one, zero = QuadScalar(1), QuadScalar(0)
    else:
        t = [float(x) for x in t]
        one, zero = 1.0, 0.0
    plus, minus = [one], [one]
    for k in range(1, K + 1):
        sp, sm = zero, zero
        for mu in _partitions(k):
            val = one
            for part in mu:
                val = val * t[part - 1]
            val = val * QuadScalar(1, 0, z_mu(mu)) if exact else val / z_mu(mu)
            sp = sp + val
            sm = sm + val * (-1) ** (k - len(mu))
        plus.append(sp)
        minus.append(sm)
    return plus, minus


# Poincare data ------------------------------------------------------------------

@dataclass
class PoincareData:
    minus_coeffs: list[int]
    plus_coeffs: list[int]
    classification: str
    rank: int | None = None
    bi_rank: tuple[int, int] | None = None
    numerator: list | None = None
    denominator: list | None = None
    pp_holds: bool = False
    palindromic: bool | None = None
    alpha: list = field(default_factory=list)
    n: int = 0

    def to_json(self) -> dict:
        out = {"minus": self.minus_coeffs, "plus": self.plus_coeffs,
               "class": self.classification, "pp_holds": self.pp_holds}
        if self.rank is not None:
            out["rank"] = self.rank
        if self.bi_rank is not None:
            out["bi_rank"] = list(self.bi_rank)
            out["numerator"] = [str(x) for x in self.numerator]
            out["denominator"] = [str(x) for x in self.denominator]
        if self.alpha:
            out["alpha"] = [x.to_json() if isinstance(x, QuadScalar) else float(x)
                            for x in self.alpha]
        return out


def _series_product(a, b, K):
    return [sum(a[i] * b[k - i] for i in range(k + 1) if i < len(a) and k - i < len(b))
            for k in range(K + 1)]


def fit_rational(coeffs, max_total: int | None = None):
    """Lowest-degree ``N/D`` with ``D(0) = 1`` matching the series ``coeffs``.

    Returns ``(p, q, N, D)`` or ``None``.  A fit of total degree ``p + q``
    is accepted only when ``len(coeffs) >= 2(p+q) + 2`` so that it is
    overdetermined.
    """
    c = [Fraction(x) for x in coeffs]
    L = len(c)
    max_total = (L - 2) // 2 if max_total is None else max_total
    for s in range(0, max_total + 1):
        if L < 2 * s + 2:
            break
        for q in range(0, s + 1):
            p = s - q
            # unknowns D_1..D_q; coefficients of t^k, k = p+1..L-1 of D*c vanish
            rows, rhs = [], []
            for k in range(p + 1, L):
                rows.append([c[k - j] if k - j >= 0 else Fraction(0) for j in range(1, q + 1)])
                rhs.append(-c[k])
            if q == 0:
                if all(x == 0 for x in rhs):
                    D = [Fraction(1)]
                else:
                    continue
            else:
                sol = linear_solve(Matrix.from_rows(rows), Matrix.from_rows([[x] for x in rhs]))
                if not sol.consistent:
                    continue
                D = [Fraction(1)] + [x.rational_part for x in sol.particular.entries()]
            Nn = _series_product(c, D, p)
            if Nn and Nn[-1] == 0 and p > 0:
                continue
            if q and D[-1] == 0:
                continue
            return p, q, Nn, D
    return None


def poincare_series(S: Symmetry, K: int, plus_K: int | None = None) -> PoincareData:
    """Dimensions of ``wedge^k_+-`` for ``k <= K`` from projector ranks, and
    the even/odd/rational classification.

    ``plus_K`` limits the symmetric side (its dimensions grow fast); by
    default it equals ``K``.
    """
    if K < 2:
        raise ValueError("K must be >= 2")
    key = ("poincare", K, plus_K)
    if key in S.cache:
        return S.cache[key]
    plus_K = K if plus_K is None else plus_K
    minus = [wedge_dim(S, k, "-") for k in range(K + 1)]
    plus = [wedge_dim(S, k, "+") for k in range(plus_K + 1)]
    data = classify(minus, plus, S.n)
    if data.classification == "even":
        data.alpha = roots_alpha(data)
    S.cache[key] = data
    return data


def classify(minus, plus, n=0) -> PoincareData:
    K = len(minus) - 1
    Kp = min(K, len(plus) - 1)
    # P_+(t) P_-(-t) = 1 through the common degree
    signed = [(-1) ** k * minus[k] for k in range(Kp + 1)]
    prod_ = _series_product(plus[:Kp + 1], signed, Kp)
    pp = prod_ == [1] + [0] * Kp
    data = PoincareData(list(minus), list(plus), "undetermined", pp_holds=pp, n=n)
    # even: minus reaches 1 at p and vanishes afterwards (at least one zero seen)
    nz = [k for k, x in enumerate(minus) if x != 0]
    p = nz[-1]
    if p < K and minus[p] == 1:
        data.classification = "even"
        data.rank = p
        data.palindromic = minus[:p + 1] == minus[:p + 1][::-1]
        data.bi_rank = (p, 0)
        data.numerator = [Fraction(x) for x in minus[:p + 1]]
        data.denominator = [Fraction(1)]
        return data
    nzp = [k for k, x in enumerate(plus) if x != 0]
    q = nzp[-1]
    if q < len(plus) - 1 and plus[q] == 1:
        data.classification = "odd"
        data.bi_rank = (0, q)
    fit = fit_rational(minus)
    if fit is not None and data.classification == "undetermined":
        pp_, qq, Nn, D = fit
        data.classification = "rational"
        data.bi_rank = (pp_, qq)
        data.numerator, data.denominator = Nn, D
    return data


def roots_alpha(data: PoincareData):
    """The ``alpha_i`` with ``P_-(t) = prod(1 + alpha_i t)``, ascending.

    The polynomial ``t^p - e_1 t^(p-1) + ...`` is factored over the integers;
    linear and quadratic factors give exact roots.  If a factor of higher
    degree appears, or the quadratic factors live in different fields, all
    roots are returned as floats (polished by Newton steps).
    """
    if data.classification != "even":
        raise PoincareError(f"roots need an even symmetry, got {data.classification}")
    p = data.rank
    e = data.minus_coeffs[:p + 1]
    # ascending coefficients of prod (t - alpha_i)
    char = flint.fmpz_poly([(-1) ** (p - k) * int(e[p - k]) for k in range(p + 1)])
    exact: list = []
    fields = set()
    ok = True
    for fac, mult in char.factor()[1]:
        c = [int(x) for x in fac.coeffs()]
        if len(c) == 2:
            exact += [QuadScalar(-c[0], 0, c[1])] * mult
        elif len(c) == 3:
            disc = c[1] * c[1] - 4 * c[0] * c[2]
            if disc < 0:
                raise PoincareError("complex alpha not supported")
            r = QuadScalar.sqrt(disc)
            if r.d:
                fields.add(r.d)
            exact += [(QuadScalar(-c[1]) - r) / (2 * c[2]),
                      (QuadScalar(-c[1]) + r) / (2 * c[2])] * mult
        else:
            ok = False
    if ok and len(fields) <= 1:
        return sorted(exact, key=float)
    coeffs = [(-1) ** k * float(e[k]) for k in range(p + 1)]
    roots = np.roots(coeffs).astype(complex)
    poly = np.poly1d(coeffs)
    dpoly = poly.deriv()
    polished = []
    for z in roots:
        for _ in range(50):
            dz = dpoly(z)
            if dz == 0:
                break
            step = poly(z) / dz
            z = z - step
            if abs(step) < 1e-15:
                break
        polished.append(z)
    if max(abs(z.imag) for z in polished) > 1e-7:
        raise PoincareError("complex alpha not supported")
    return sorted(float(z.real) for z in polished)


def elementary_from_alpha(alpha) -> list:
    """Elementary symmetric functions ``e_0..e_p`` of the multiset."""
    e = [QuadScalar(1) if isinstance(alpha[0], QuadScalar) else 1.0]
    for a in alpha:
        new = list(e) + [e[0] * 0]
        for k in range(len(e), 0, -1):
            new[k] = new[k] + e[k - 1] * a
        e = new
    return e


# determinant machinery --------------------------------------------------------------

@dataclass
class DetPair:
    v: Matrix  # n^p column
    u: Matrix  # n^p column
    p: int

    def contraction(self):
        return (self.u.T @ self.v)[0, 0]


def determinant_pair(S: Symmetry) -> DetPair:
    """The determinant ``v`` spanning ``Im P_-^p`` (first nonzero coordinate 1)
    and the codeterminant ``u`` with ``P_-^p = v u^T`` and ``u.v = 1``."""
    if "detpair" in S.cache:
        return S.cache["detpair"]
    data = _even_data(S)
    p = data.rank
    P = projector(S, p, "-")
    r = mat_rank(P)
    if r != 1:
        raise PoincareError(f"rank of P_-^{p} is {r}, expected 1")
    N = P.rows
    # first nonzero column, scaled to its first nonzero coordinate
    col = next(j for j in range(N) if not P.col(j).is_zero())
    c = P.col(col)
    first = next(i for i in range(N) if not _entry_zero(c, i))
    v = c.scale(1 / QuadScalar.coerce(c[first, 0])) if c.is_exact else c.scale(1 / c[first, 0])
    # P = v u^T  =>  u^T = row `first` of P (since v[first] = 1)
    u = P.submatrix([first], range(N)).T
    dp = DetPair(v=v, u=u, p=p)
    S.cache["detpair"] = dp
    return dp


def _entry_zero(M: Matrix, i: int) -> bool:
    x = M[i, 0]
    return x.is_zero() if M.is_exact else abs(x) <= M.tol


def _even_data(S: Symmetry) -> PoincareData:
    if "even_data" in S.cache:
        return S.cache["even_data"]
    K = 3
    while True:
        data = poincare_series(S, K, plus_K=min(K, 2))
        if data.classification == "even":
            break
        if K >= S.cap() or S.n ** (K + 1) > 10**5:
            raise PoincareError(f"symmetry is not even up to degree {K} "
                                f"({data.classification})")
        K += 1
    S.cache["even_data"] = data
    return data


def rank_of(S: Symmetry) -> int:
    return _even_data(S).rank


def _reshape(col: Matrix, rows: int, cols: int) -> Matrix:
    e = col.entries()
    if not col.is_exact:
        return Matrix.from_float(np.array(e).reshape(rows, cols))
    return Matrix.from_rows([e[i * cols:(i + 1) * cols] for i in range(rows)])


def mn_matrices(S: Symmetry, dp: DetPair | None = None) -> tuple[Matrix, Matrix]:
    """``M_i^j = u_{.. i} v^{j ..}`` and ``N_i^j = u_{i ..} v^{.. j}``
    (row index ``i``, column index ``j``)."""
    dp = dp or determinant_pair(S)
    n, p = S.n, dp.p
    rest = n ** (p - 1)
    U_last = _reshape(dp.u, rest, n)    # U[(i1..i_{p-1}), i]
    V_first = _reshape(dp.v, n, rest)   # V[j, (i1..i_{p-1})]
    M = (V_first @ U_last).T
    U_first = _reshape(dp.u, n, rest)   # U[i, (i1..)]
    V_last = _reshape(dp.v, rest, n)    # V[(i1..), j]
    Nm = U_first @ V_last
    return M, Nm


@dataclass
class MNReport:
    M: Matrix
    N: Matrix
    prod_residual: float
    com_left_residual: float
    com_right_residual: float
    prod_ok: bool
    com_ok: bool


def _ok(res: Matrix) -> bool:
    return res.is_zero() if res.is_exact else res.norm() <= 1e-9


def mn_report(S: Symmetry, dp: DetPair | None = None) -> MNReport:
    """Check ``M N = p^-2 Id`` and the commutation rules of ``v`` with ``V``."""
    dp = dp or determinant_pair(S)
    n, p = S.n, dp.p
    M, Nm = mn_matrices(S, dp)
    prod_res = M @ Nm - Matrix.identity(n, M.mode).scale(QuadScalar(1, 0, p * p))
    c = (-1) ** (p - 1) * p
    left, right = commutation_matrices(S, dp)
    res_l = left - M.scale(c)
    res_r = right - Nm.scale(c)
    return MNReport(M, Nm, prod_res.norm(), res_l.norm(), res_r.norm(),
                    _ok(prod_res), _ok(res_l) and _ok(res_r))


def commutation_matrices(S: Symmetry, dp: DetPair | None = None) -> tuple[Matrix, Matrix]:
    """Matrices ``K, L`` with ``S(v (x) x_i) = K_i^j x_j (x) v`` and
    ``S(x_i (x) v) = L_i^j v (x) x_j``, read off from the braid lift of S to
    ``T^p(V) (x) V``.  Raises if the images are not of that form."""
    from .exactnum import kron

    dp = dp or determinant_pair(S)
    n, p = S.n, dp.p
    m = p + 1
    # move_left = S^{12} S^{23} ... S^{p,p+1}: x at slot p+1 travels to slot 1
    # move_right = S^{p,p+1} ... S^{12}: x at slot 1 travels to slot p+1
    move_left = S.identity(m)
    for i in range(1, p + 1):
        move_left = move_left @ S.local(m, i)
    move_right = S.identity(m)
    for i in range(p, 0, -1):
        move_right = move_right @ S.local(m, i)
    Id = Matrix.identity(n, S.mode)
    left_in = kron(dp.v, Id)     # columns v (x) x_i
    right_in = kron(Id, dp.v)    # columns x_i (x) v
    L_out = move_left @ left_in  # should be sum_j K_ij x_j (x) v
    R_out = move_right @ right_in
    # coefficient of x_j (x) v: contract with x^j (x) u
    K = (kron(Id, dp.u).T @ L_out).T
    L = (kron(dp.u, Id).T @ R_out).T
    if not _ok(L_out - kron(Id, dp.v) @ K.T) or not _ok(R_out - kron(dp.v, Id) @ L.T):
        raise PoincareError("Im P_-^p is not invariant under the braid lift")
    return K, L


@dataclass
class CentralityReport:
    central: bool
    left: Matrix    # (-1)^(p-1) p M
    right: Matrix   # (-1)^(p-1) p N


def centrality(S: Symmetry) -> CentralityReport:
    dp = determinant_pair(S)
    M, Nm = mn_matrices(S, dp)
    c = (-1) ** (dp.p - 1) * dp.p
    left, right = M.scale(c), Nm.scale(c)
    Id = Matrix.identity(S.n, M.mode)
    return CentralityReport(_ok(left - Id) and _ok(right - Id), left, right)


# column inverse ----------------------------------------------------------------------

class NotInvertibleByColumn(PoincareError):
    pass


@dataclass
class DualTensors:
    T: Matrix      # T[(k,i),(m,n)] = T_km^in
    C: Matrix      # C_i^j = T_ik^jk
    B: Matrix      # B_i^j = T_ki^kj
    Cdet: Matrix   # v^{i i2..} u_{j i2..}
    trace: object  # T_ij^ij

    def t(self, k, m, i, n_, dim):
        return self.T[k * dim + i, m * dim + n_]


def reindexed(S: Symmetry) -> Matrix:
    """``M1[(l,j),(k,i)] = S_ij^kl``."""
    n = S.n
    N = n * n
    ent = S.S.entries()
    rows = [[None] * N for _ in range(N)]
    for i, j, k, l in product(range(n), repeat=4):
        rows[l * n + j][k * n + i] = ent[(k * n + l) * N + i * n + j]
    if not S.S.is_exact:
        return Matrix.from_float(np.array(rows, dtype=float))
    return Matrix.from_rows(rows)


def dual_tensors(S: Symmetry) -> DualTensors:
    """Solve ``S_ij^kl T_km^in = d_m^l d_j^n`` and form C, B, C_det."""
    if "duals" in S.cache:
        return S.cache["duals"]
    n = S.n
    M1 = reindexed(S)
    sol = linear_solve(M1, Matrix.identity(n * n, M1.mode))
    if not sol.unique:
        raise NotInvertibleByColumn("the reindexed operator is singular")
    T = sol.particular

    def contract(f):
        rows = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = QuadScalar(0) if T.is_exact else 0.0
                for k in range(n):
                    acc = acc + f(i, j, k)
                row.append(acc)
            rows.append(row)
        return Matrix.from_rows(rows) if T.is_exact else Matrix.from_float(np.array(rows))

    C = contract(lambda i, j, k: T[i * n + j, k * n + k])
    B = contract(lambda i, j, k: T[k * n + k, i * n + j])
    tr = QuadScalar(0) if T.is_exact else 0.0
    for i in range(n):
        for j in range(n):
            tr = tr + T[i * n + i, j * n + j]
    try:
        dp = determinant_pair(S)
        rest = n ** (dp.p - 1)
        Cdet = _reshape(dp.v, n, rest) @ _reshape(dp.u, n, rest).T
    except PoincareError:
        Cdet = None
    out = DualTensors(T, C, B, Cdet, tr)
    S.cache["duals"] = out
    return out


@dataclass
class DualReport:
    defining_identity: bool
    bc_identity: bool
    trace: object
    trace_equals_rank: bool
    c_equals_p_cdet: bool | None
    # B_i^j = p C_det^j_i is the relation the determinant pairing produces on
    # every fixture tried; C = p C_det holds only when C is an involution up to p
    b_equals_p_cdet: bool | None = None


def dual_report(S: Symmetry) -> DualReport:
    n = S.n
    dt = dual_tensors(S)
    M1 = reindexed(S)
    ident = _ok(M1 @ dt.T - Matrix.identity(n * n, M1.mode))
    bc = _ok(dt.B @ dt.C - Matrix.identity(n, M1.mode))
    try:
        p = rank_of(S)
    except PoincareError:
        p = None
    tr_ok = p is not None and (dt.trace == p if M1.is_exact else abs(dt.trace - p) < 1e-9)
    cp = bp = None
    if dt.Cdet is not None and p is not None:
        cp = _ok(dt.C - dt.Cdet.scale(p))
        bp = _ok(dt.B - dt.Cdet.T.scale(p))
    return DualReport(ident, bc, dt.trace, tr_ok, cp, bp)
