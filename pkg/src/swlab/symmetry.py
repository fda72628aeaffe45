"""Involutive Yang-Baxter operators ("symmetries") and their braid representation.

Index convention, used everywhere in the package: the operator matrix of a
symmetry has row index ``k*n + l`` and column index ``i*n + j`` for the
coefficient of ``x_k (x) x_l`` in ``S(x_i (x) x_j)``.  The 4-index tensor is
``S_ij^kl = S.matrix[k*n + l, i*n + j]``, so the lower pair is the input.
With this convention the rank-2 form ``S_ij^kl = d_i^k d_j^l - 2 u_ij v^kl``
has ``(Id - S)/2 = |v><u|``: the skew square is spanned by ``v``.
"""
from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from functools import cached_property

import flint
import numpy as np

from .exactnum import DimensionCapError, Matrix, QuadScalar, kron

EXACT_M_CAP = int(os.environ.get("SWLAB_EXACT_M", "5"))
FLOAT_M_CAP = int(os.environ.get("SWLAB_FLOAT_M", "8"))
AXIOM_TOL = 1e-9


class SymmetryError(ValueError):
    """A matrix failed the symmetry axioms or a construction constraint."""


class Permutation:
    """Bijection of ``1..m`` stored by its images; ``(p*q)(k) = p(q(k))``."""

    __slots__ = ("images", "_word")

    def __init__(self, images):
        images = tuple(int(x) for x in images)
        if sorted(images) != list(range(1, len(images) + 1)):
            raise ValueError(f"not a permutation of 1..{len(images)}: {images}")
        self.images = images
        self._word = None

    @classmethod
    def identity(cls, m: int) -> Permutation:
        return cls(range(1, m + 1))

    @classmethod
    def transposition(cls, m: int, i: int, j: int) -> Permutation:
        img = list(range(1, m + 1))
        img[i - 1], img[j - 1] = img[j - 1], img[i - 1]
        return cls(img)

    @classmethod
    def cycle(cls, m: int, *points: int) -> Permutation:
        """The cycle ``points[0] -> points[1] -> ... -> points[0]``."""
        img = list(range(1, m + 1))
        for a, b in zip(points, points[1:] + points[:1]):
            img[a - 1] = b
        return cls(img)

    @classmethod
    def from_word(cls, m: int, word) -> Permutation:
        out = cls.identity(m)
        for i in word:
            out = out * cls.transposition(m, i, i + 1)
        return out

    @classmethod
    def all(cls, m: int):
        for p in itertools.permutations(range(1, m + 1)):
            yield cls(p)

    @property
    def m(self) -> int:
        return len(self.images)

    def __call__(self, k: int) -> int:
        return self.images[k - 1]

    def __mul__(self, other: Permutation) -> Permutation:
        return Permutation(self.images[k - 1] for k in other.images)

    def inverse(self) -> Permutation:
        inv = [0] * self.m
        for k, img in enumerate(self.images, 1):
            inv[img - 1] = k
        return Permutation(inv)

    def __eq__(self, other):
        return isinstance(other, Permutation) and self.images == other.images

    def __hash__(self):
        return hash(self.images)

    def __repr__(self):
        return f"Permutation({list(self.images)})"

    def word(self) -> tuple[int, ...]:
        """Adjacent transpositions ``(i1, ..., ir)`` with ``self = s_i1 ... s_ir``.

        Bubble sort of the image list; right multiplication by ``s_i`` swaps
        list slots ``i, i+1``.
        """
        if self._word is None:
            lst = list(self.images)
            swaps = []
            for end in range(len(lst) - 1, 0, -1):
                for i in range(end):
                    if lst[i] > lst[i + 1]:
                        lst[i], lst[i + 1] = lst[i + 1], lst[i]
                        swaps.append(i + 1)
            self._word = tuple(reversed(swaps))
        return self._word

    def sign(self) -> int:
        return -1 if len(self.word()) % 2 else 1

    def cycle_type(self) -> tuple[int, ...]:
        seen, lengths = set(), []
        for start in range(1, self.m + 1):
            if start in seen:
                continue
            k, length = start, 0
            while k not in seen:
                seen.add(k)
                k = self(k)
                length += 1
            lengths.append(length)
        return tuple(sorted(lengths, reverse=True))


@dataclass
class VerificationReport:
    involutive: bool
    qybe: bool
    remark21_conjugation: bool
    residuals: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.involutive and self.qybe and self.remark21_conjugation

    def to_json(self) -> dict:
        return {"involutive": self.involutive, "qybe": self.qybe,
                "remark21_conjugation": self.remark21_conjugation,
                "residuals": self.residuals, "ok": self.ok}


def flip_matrix(n: int, mode: str = "exact") -> Matrix:
    N = n * n
    if mode == "float":
        arr = np.zeros((N, N))
        for i in range(n):
            for j in range(n):
                arr[j * n + i, i * n + j] = 1.0
        return Matrix.from_float(arr)
    m = flint.fmpq_mat(N, N)
    for i in range(n):
        for j in range(n):
            m[j * n + i, i * n + j] = 1
    return Matrix(N, N, re=m)


def local_operator(S: Matrix, n: int, m: int, i: int) -> Matrix:
    """``Id_{i-1} (x) S (x) Id_{m-i-1}`` on ``T^m(V)``; ``i`` is 1-based."""
    if not 1 <= i <= m - 1:
        raise ValueError(f"position {i} outside 1..{m - 1}")
    left, right = n ** (i - 1), n ** (m - i - 1)
    N = n ** m
    if not S.is_exact:
        return Matrix.from_float(np.kron(np.kron(np.eye(left), S.arr), np.eye(right)), tol=S.tol)
    re, ir = flint.fmpq_mat(N, N), flint.fmpq_mat(N, N)
    nz = []
    for r in range(n * n):
        for c in range(n * n):
            a = S.re[r, c]
            b = S.ir[r, c] if S.ir is not None else 0
            if a != 0 or b != 0:
                nz.append((r, c, a, b))
    block = n * n * right
    for a_idx in range(left):
        base = a_idx * block
        for r, c, a, b in nz:
            for b_idx in range(right):
                row = base + r * right + b_idx
                col = base + c * right + b_idx
                if a != 0:
                    re[row, col] = a
                if b != 0:
                    ir[row, col] = b
    return Matrix(N, N, re=re, ir=ir, d=S.d)


def verify_matrix(S: Matrix, n: int) -> VerificationReport:
    """Check involutivity and the braid relation on T^3, together with the
    conjugation identity relating S^{23} to S^{12} through flips."""
    exact = S.is_exact
    I2 = Matrix.identity(n * n, S.mode)
    inv_res = S @ S - I2
    S12, S23 = local_operator(S, n, 3, 1), local_operator(S, n, 3, 2)
    yb_res = S12 @ S23 @ S12 - S23 @ S12 @ S23
    F = flip_matrix(n, S.mode)
    F12, F23 = local_operator(F, n, 3, 1), local_operator(F, n, 3, 2)
    conj_res = F12 @ F23 @ S12 @ F23 @ F12 - S23

    def ok(res):
        return res.is_zero() if exact else res.norm() <= AXIOM_TOL

    return VerificationReport(
        involutive=ok(inv_res), qybe=ok(yb_res), remark21_conjugation=ok(conj_res),
        residuals={"involutive": inv_res.norm(), "qybe": yb_res.norm(),
                   "remark21_conjugation": conj_res.norm()})


class Symmetry:
    """A verified involutive solution of the braid relation on ``V (x) V``.

    Construction always runs :func:`verify_matrix`; an operator failing any
    axiom raises :class:`SymmetryError`.
    """

    def __init__(self, S: Matrix, n: int, kind: str = "custom", *, u: Matrix | None = None,
                 v: Matrix | None = None, parts: tuple = (), b=None, report=None):
        if S.shape != (n * n, n * n):
            raise SymmetryError(f"operator shape {S.shape} does not match dim {n}")
        self.n = n
        self.S = S
        self.kind = kind
        self.u, self.v = u, v
        self.parts = parts
        self.b = b
        # a caller that already checked the axioms (e.g. in float on a large
        # induced operator) may hand its report in
        self.report = report if report is not None else verify_matrix(S, n)
        if not self.report.ok:
            failed = [k for k in ("involutive", "qybe", "remark21_conjugation")
                      if not getattr(self.report, k)]
            raise SymmetryError(f"symmetry axioms violated: {', '.join(failed)} "
                                f"(residuals {self.report.residuals})")
        self._local: dict = {}
        self._rho: dict = {}
        self.cache: dict = {}

    @property
    def mode(self) -> str:
        return self.S.mode

    @property
    def d(self) -> int:
        return self.S.d

    def tensor(self, i: int, j: int, k: int, l: int):
        """``S_ij^kl`` (0-based indices)."""
        n = self.n
        return self.S[k * n + l, i * n + j]

    def cap(self) -> int:
        return EXACT_M_CAP if self.S.is_exact else FLOAT_M_CAP

    def check_cap(self, m: int):
        if m > self.cap():
            raise DimensionCapError(
                f"tensor power {m} exceeds the {self.mode}-mode cap {self.cap()}")

    def local(self, m: int, i: int) -> Matrix:
        """``S^{i,i+1}`` on ``T^m(V)`` (1-based ``i``), cached."""
        key = (m, i)
        if key not in self._local:
            self.check_cap(m)
            self._local[key] = local_operator(self.S, self.n, m, i)
        return self._local[key]

    def identity(self, m: int) -> Matrix:
        return Matrix.identity(self.n ** m, self.mode)

    def rho(self, m: int, perm: Permutation) -> Matrix:
        """``rho_S(perm)`` on ``T^m(V)``."""
        if perm.m != m:
            raise ValueError(f"permutation of {perm.m} points used at tensor power {m}")
        key = (m, perm.images)
        if key not in self._rho:
            self.check_cap(m)
            word = perm.word()
            if not word:
                out = self.identity(m)
            elif len(word) == 1:
                out = self.local(m, word[0])
            else:
                last = word[-1]
                prefix = perm * Permutation.transposition(m, last, last + 1)
                out = self.rho(m, prefix) @ self.local(m, last)
            self._rho[key] = out
        return self._rho[key]

    def rho_word(self, m: int, word) -> Matrix:
        """Product of ``S^{i,i+1}`` along an arbitrary word (no caching)."""
        out = self.identity(m)
        for i in word:
            out = out @ self.local(m, i)
        return out

    def to_float(self) -> Symmetry:
        return Symmetry(self.S.to_float(), self.n, self.kind, parts=self.parts, b=self.b)

    def __repr__(self):
        return f"Symmetry(n={self.n}, kind={self.kind!r}, {self.S!r})"

    @cached_property
    def is_classical_flip(self) -> bool:
        return self.S == flip_matrix(self.n, self.mode)

    # serialization ------------------------------------------------------------

    def to_json(self) -> dict:
        def enc(M: Matrix):
            if M.is_exact:
                return [[x.to_json() for x in row] for row in M.tolist()]
            return M.to_numpy().tolist()

        out = {"dim": self.n, "field": {"d": self.d}, "kind": self.kind,
               "mode": self.mode}
        if self.kind == "rank2" and self.u is not None:
            out["u"] = enc(self.u)
            out["v"] = enc(self.v)
        else:
            out["S"] = enc(self.S)
        if self.kind == "super" and self.b is not None:
            out["b"] = self.b.to_json() if isinstance(self.b, QuadScalar) else self.b
        return out

    @classmethod
    def from_json(cls, data: dict) -> Symmetry:
        n = int(data["dim"])
        d = int(data.get("field", {}).get("d", 0))
        float_mode = data.get("mode") == "float"

        def dec(rows):
            if float_mode:
                return Matrix.from_float(np.array(rows, dtype=float))
            return Matrix.from_rows([[QuadScalar.from_json(x, d) for x in r] for r in rows])

        kind = data.get("kind", "custom")
        if kind == "rank2" and "u" in data:
            return build_rank2(dec(data["u"]), dec(data["v"]))
        if "S" not in data:
            raise ValueError("symmetry JSON needs either u/v (rank2) or S")
        S = dec(data["S"])
        b = data.get("b")
        if b is not None and not float_mode:
            b = QuadScalar.from_json(b, d)
        return cls(S, n, kind, b=b)


# constructions ----------------------------------------------------------------

def _vec(M: Matrix) -> Matrix:
    """Flatten an n x n matrix into an n^2 column, index i*n + j."""
    if not M.is_exact:
        return Matrix.from_float(M.arr.reshape(-1, 1))
    return Matrix.from_rows([[x] for x in M.entries()])


def build_rank2(u: Matrix, v: Matrix) -> Symmetry:
    """``S_ij^kl = d_i^k d_j^l - 2 u_ij v^kl`` after checking
    ``u_ij v^ij = 1`` and ``u v u^t v^t = Id/4``."""
    if u.shape != v.shape or u.rows != u.cols or u.rows < 2:
        raise SymmetryError("u and v must be square of equal size n >= 2")
    n = u.rows
    exact = u.is_exact and v.is_exact
    pair = (u.to_numpy() * v.to_numpy()).sum() if not exact else sum(
        (a * b for a, b in zip(u.entries(), v.entries())), QuadScalar(0))
    res1 = pair - 1
    if (exact and not res1.is_zero()) or (not exact and abs(res1) > AXIOM_TOL):
        raise SymmetryError(f"constraint u_ij v^ij = 1 violated (residual {res1})")
    quad = u @ v @ u.T @ v.T - Matrix.identity(n, "exact" if exact else "float").scale(
        QuadScalar(1, 0, 4))
    if (exact and not quad.is_zero()) or (not exact and quad.norm() > AXIOM_TOL):
        raise SymmetryError(
            f"constraint u v u^t v^t = Id/4 violated (residual {quad.norm():.3g})")
    S = Matrix.identity(n * n, "exact" if exact else "float") - (_vec(v) @ _vec(u).T).scale(2)
    return Symmetry(S, n, "rank2", u=u, v=v)


def skew_diagonal_n3(a, b, branch: str = "plus") -> tuple[Matrix, Matrix]:
    """The two-parameter skew-diagonal rank-2 family on a 3-dimensional space
    with central determinant; ``x`` is the chosen root of ``x + 1/x = 3``."""
    a, b = QuadScalar.coerce(a), QuadScalar.coerce(b)
    if a.is_zero() or b.is_zero():
        raise SymmetryError("parameters a and b must be nonzero")
    if branch not in ("plus", "minus"):
        raise ValueError("branch must be 'plus' or 'minus'")
    x = QuadScalar(3, 1 if branch == "plus" else -1, 2, 5)
    two = QuadScalar(2)
    z = QuadScalar(0)
    u = Matrix.from_rows([[z, z, a], [z, b, z], [-a / x, z, z]])
    v = Matrix.from_rows([[z, z, x / (two * a)], [z, -1 / (two * b), z],
                          [-1 / (two * a), z, z]])
    return u, v


def noncentral_n3(branch: str = "plus") -> tuple[Matrix, Matrix]:
    """An antidiagonal rank-2 symmetry on a 3-dimensional space whose
    determinant is not central: ``(-1)^(p-1) p M = diag(1/2, 1, 2)``."""
    if branch not in ("plus", "minus"):
        raise ValueError("branch must be 'plus' or 'minus'")
    A = QuadScalar(3, 1 if branch == "plus" else -1, 4, 5)
    z, one = QuadScalar(0), QuadScalar(1)
    u = Matrix.from_rows([[z, z, one], [z, one, z], [-1 / (4 * A), z, z]])
    v = Matrix.from_rows([[z, z, A], [z, QuadScalar(-1, 0, 2), z], [-one, z, z]])
    return u, v


def classical_pair(n: int = 2) -> tuple[Matrix, Matrix]:
    """Rank-2 data whose symmetry is the flip on a 2-dimensional space."""
    if n != 2:
        raise ValueError("the flip is rank-2 only in dimension 2")
    h = QuadScalar(1, 0, 2)
    u = Matrix.from_rows([[0, h], [-h, 0]])
    v = Matrix.from_rows([[0, 1], [-1, 0]])
    return u, v


def flip(n: int, mode: str = "exact") -> Symmetry:
    return Symmetry(flip_matrix(n, mode), n, "custom")


def glue(S1: Symmetry, S2: Symmetry) -> Symmetry:
    """Symmetry on ``(V1 + V2)^{(x)2}``: S1 on V1V1, S2 on V2V2, the flip on
    mixed blocks.  Basis: ``V1`` first.  Inputs from different quadratic
    fields fall back to float mode."""
    n1, n2 = S1.n, S2.n
    n = n1 + n2
    exact = S1.S.is_exact and S2.S.is_exact and (S1.d == S2.d or 0 in (S1.d, S2.d))
    A = S1.S.to_numpy() if not exact else None
    B = S2.S.to_numpy() if not exact else None
    N = n * n
    if exact:
        vals: dict = {}
    else:
        arr = np.zeros((N, N))

    def put(r, c, x):
        if exact:
            vals[(r, c)] = x
        else:
            arr[r, c] = x

    e1, e2 = (S1.S.entries(), S2.S.entries()) if exact else (None, None)
    for i in range(n1):
        for j in range(n1):
            for k in range(n1):
                for l in range(n1):
                    x = e1[(k * n1 + l) * n1 * n1 + i * n1 + j] if exact else A[k * n1 + l, i * n1 + j]
                    if x:
                        put(k * n + l, i * n + j, x)
    for i in range(n2):
        for j in range(n2):
            for k in range(n2):
                for l in range(n2):
                    x = e2[(k * n2 + l) * n2 * n2 + i * n2 + j] if exact else B[k * n2 + l, i * n2 + j]
                    if x:
                        put((n1 + k) * n + n1 + l, (n1 + i) * n + n1 + j, x)
    for i in range(n1):
        for j in range(n1, n):
            put(j * n + i, i * n + j, 1)
            put(i * n + j, j * n + i, 1)
    if exact:
        rows = [[vals.get((r, c), 0) for c in range(N)] for r in range(N)]
        S = Matrix.from_rows(rows)
    else:
        S = Matrix.from_float(arr)
    return Symmetry(S, n, "glued", parts=(S1, S2))


def super_example(b=0) -> Symmetry:
    """Two-dimensional symmetry ``xx -> xx + b yy, xy -> yx, yx -> xy,
    yy -> -yy`` (basis ``x = x_0``, ``y = x_1``)."""
    if isinstance(b, float):
        S = np.zeros((4, 4))
        S[0, 0], S[3, 0] = 1.0, b
        S[2, 1] = S[1, 2] = 1.0
        S[3, 3] = -1.0
        return Symmetry(Matrix.from_float(S), 2, "super", b=b)
    b = QuadScalar.coerce(b)
    cols = {0: {0: 1, 3: b}, 1: {2: 1}, 2: {1: 1}, 3: {3: -1}}
    rows = [[cols[c].get(r, 0) for c in range(4)] for r in range(4)]
    return Symmetry(Matrix.from_rows(rows), 2, "super", b=b)


def verify(S: Symmetry) -> VerificationReport:
    return verify_matrix(S.S, S.n)


def rho_perm(S: Symmetry, m: int, perm: Permutation) -> Matrix:
    return S.rho(m, perm)


def restrict_block(S: Symmetry, idx1, idx2) -> Matrix:
    """Entries of S mapping span{x_i x_j : i in idx1, j in idx2} into
    span{x_k x_l : k in idx2, l in idx1} (mixed blocks swap factor order)."""
    n = S.n
    cols = [i * n + j for i in idx1 for j in idx2]
    rows = [k * n + l for k in idx2 for l in idx1]
    return S.S.submatrix(rows, cols)
