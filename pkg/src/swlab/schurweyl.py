"""Partitions, symmetric-group characters, Young symmetrizers and the twisted
Schur functors ``V_lambda = Im rho_S(p_lambda)``.

The canonical tableau fills ``1..m`` column by column, so every column
occupies a block of consecutive tensor slots.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .exactnum import Matrix, QuadScalar, column_space, kron, linear_solve, mat_rank
from .symmetry import Permutation, Symmetry, verify_matrix


class PartitionError(ValueError):
    pass


# partitions -------------------------------------------------------------------

def normalize(parts) -> tuple[int, ...]:
    """Drop zero parts and check the sequence is a partition."""
    if isinstance(parts, str):
        parts = [int(x) for x in parts.replace(" ", "").split(",") if x != ""]
    out = tuple(int(x) for x in parts if int(x) != 0)
    if any(x < 0 for x in out):
        raise PartitionError(f"negative part in {parts!r}")
    if any(out[i] < out[i + 1] for i in range(len(out) - 1)):
        raise PartitionError(f"parts must be weakly decreasing: {parts!r}")
    return out


def enumerate_partitions(m: int) -> list[tuple[int, ...]]:
    """All partitions of m, in reverse lexicographic order."""
    out = []

    def rec(rest, maxpart, acc):
        if rest == 0:
            out.append(tuple(acc))
            return
        for first in range(min(rest, maxpart), 0, -1):
            rec(rest - first, first, acc + [first])

    rec(m, m, [])
    return out


def conjugate(lam) -> tuple[int, ...]:
    lam = normalize(lam)
    if not lam:
        return ()
    return tuple(sum(1 for part in lam if part > j) for j in range(lam[0]))


def reduce_partition(lam, p: int) -> tuple[int, ...]:
    """Remove full columns of height ``p``: subtract ``lam_p`` from every part
    when the length is ``p``. Lengths above ``p`` are rejected."""
    lam = normalize(lam)
    if len(lam) > p:
        raise PartitionError(f"length {len(lam)} exceeds rank {p}")
    if len(lam) < p:
        return lam
    shift = lam[-1]
    return normalize([part - shift for part in lam])


def shift(lam, a: int, p: int) -> tuple[int, ...]:
    """Add ``a`` to each of the first ``p`` parts (padding with zeros)."""
    lam = list(normalize(lam)) + [0] * p
    return normalize([x + a for x in lam[:p]])


def hook_dim(lam) -> int:
    """Dimension of the Specht module, ``m! / prod(hooks)``."""
    lam = normalize(lam)
    conj = conjugate(lam)
    prod = 1
    for i, row in enumerate(lam):
        for j in range(row):
            prod *= (row - j - 1) + (conj[j] - i - 1) + 1
    return math.factorial(sum(lam)) // prod


def contents(lam) -> list[int]:
    return [j - i for i, row in enumerate(normalize(lam)) for j in range(row)]


# characters -------------------------------------------------------------------

@lru_cache(maxsize=None)
def _mn(beta: tuple[int, ...], mu: tuple[int, ...]) -> int:
    # Murnaghan-Nakayama on beta-sets: removing a border strip of length r is
    # moving a bead from b to b - r; the sign counts beads jumped over.
    if not mu:
        return 1
    r, rest = mu[0], mu[1:]
    beads = set(beta)
    total = 0
    for b in beta:
        if b - r < 0 or (b - r) in beads:
            continue
        jumped = sum(1 for c in beta if b - r < c < b)
        new = tuple(sorted((beads - {b}) | {b - r}, reverse=True))
        total += (-1) ** jumped * _mn(new, rest)
    return total


def character(lam, cycle_type) -> int:
    """``chi_lambda`` on the class with the given cycle type."""
    lam, mu = normalize(lam), normalize(sorted(normalize_loose(cycle_type), reverse=True))
    if sum(lam) != sum(mu):
        raise PartitionError(f"weights differ: |{lam}| != |{mu}|")
    ell = len(lam)
    beta = tuple(lam[i] + ell - 1 - i for i in range(ell))
    return _mn(beta, mu)


def normalize_loose(parts) -> tuple[int, ...]:
    if isinstance(parts, str):
        parts = [int(x) for x in parts.split(",") if x.strip()]
    return tuple(int(x) for x in parts if int(x) != 0)


def gamma(lam) -> Fraction:
    """Eigenvalue of the sum of all transpositions on the isotypic component.

    Computed from the transposition-class character and checked against the
    content sum; a disagreement raises.
    """
    lam = normalize(lam)
    m = sum(lam)
    if m < 2:
        return Fraction(0)
    chi = character(lam, (2,) + (1,) * (m - 2))
    via_char = Fraction((m * m - m) * chi, 2 * hook_dim(lam))
    via_content = Fraction(sum(contents(lam)))
    if via_char != via_content:
        raise ArithmeticError(f"gamma mismatch for {lam}: {via_char} vs {via_content}")
    return via_char


# group algebra ------------------------------------------------------------------

class GroupAlgebraElement:
    """Finite linear combination of permutations of ``m`` points."""

    def __init__(self, m: int, terms: dict | None = None):
        self.m = m
        self.terms: dict[Permutation, QuadScalar] = {}
        for perm, c in (terms or {}).items():
            c = QuadScalar.coerce(c)
            if not c.is_zero():
                self.terms[perm] = c

    @classmethod
    def identity(cls, m: int) -> GroupAlgebraElement:
        return cls(m, {Permutation.identity(m): 1})

    def __add__(self, other):
        out = dict(self.terms)
        for perm, c in other.terms.items():
            out[perm] = out.get(perm, QuadScalar(0)) + c
        return GroupAlgebraElement(self.m, out)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, s):
        s = QuadScalar.coerce(s)
        return GroupAlgebraElement(self.m, {p: c * s for p, c in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, GroupAlgebraElement):
            return self.scale(other)
        out: dict = {}
        for p1, c1 in self.terms.items():
            for p2, c2 in other.terms.items():
                key = p1 * p2
                out[key] = out.get(key, QuadScalar(0)) + c1 * c2
        return GroupAlgebraElement(self.m, out)

    def __eq__(self, other):
        return isinstance(other, GroupAlgebraElement) and self.m == other.m \
            and self.terms == other.terms

    def __len__(self):
        return len(self.terms)

    def __repr__(self):
        return f"GroupAlgebraElement(m={self.m}, {len(self.terms)} terms)"

    def represent(self, S: Symmetry) -> Matrix:
        """``sum c_pi rho_S(pi)`` on ``T^m(V)``; the direct (slow) route."""
        out = Matrix.zeros(S.n ** self.m, S.n ** self.m, S.mode)
        for perm, c in self.terms.items():
            term = S.rho(self.m, perm)
            out = out + (term.scale(c) if S.S.is_exact else term.scale(float(c)))
        return out


def column_tableau(lam) -> list[list[int]]:
    """Rows of the tableau filled with ``1..m`` column by column."""
    lam = normalize(lam)
    conj = conjugate(lam)
    rows = [[0] * r for r in lam]
    k = 1
    for j, height in enumerate(conj):
        for i in range(height):
            rows[i][j] = k
            k += 1
    return rows


def _set_symmetrizer(m: int, blocks, signed: bool) -> GroupAlgebraElement:
    """Product over blocks of the (anti)symmetrizer of each block."""
    out = GroupAlgebraElement.identity(m)
    for block in blocks:
        if len(block) < 2:
            continue
        terms = {}
        for perm in Permutation.all(len(block)):
            images = list(range(1, m + 1))
            for a, b in zip(block, perm.images):
                images[a - 1] = block[b - 1]
            sgn = perm.sign() if signed else 1
            terms[Permutation(images)] = sgn
        out = out * GroupAlgebraElement(m, terms)
    return out


def young_symmetrizer(lam) -> GroupAlgebraElement:
    """``p_lambda = c_lambda r_lambda`` (column antisymmetrizer times row
    symmetrizer) for the column-filled tableau."""
    lam = normalize(lam)
    m = sum(lam)
    rows = column_tableau(lam)
    cols = [[rows[i][j] for i in range(len(rows)) if j < len(rows[i])]
            for j in range(lam[0] if lam else 0)]
    c = _set_symmetrizer(m, cols, signed=True)
    r = _set_symmetrizer(m, rows, signed=False)
    return c * r


def central_idempotent(lam) -> GroupAlgebraElement:
    """``z_lambda = (dim M_lambda / m!) sum_pi chi_lambda(pi) pi``."""
    lam = normalize(lam)
    m = sum(lam)
    coef = QuadScalar(hook_dim(lam), 0, math.factorial(m))
    terms = {}
    for perm in Permutation.all(m):
        chi = character(lam, perm.cycle_type())
        if chi:
            terms[perm] = coef * chi
    return GroupAlgebraElement(m, terms)


# Schur functors -------------------------------------------------------------------

def _block_projector(S: Symmetry, sizes, sign: str) -> Matrix:
    from .poincare import projector

    out = None
    for size in sizes:
        P = projector(S, size, sign) if size > 1 else S.identity(1)
        out = P if out is None else kron(out, P)
    return out


def _row_layout(lam) -> Permutation:
    """``w`` sending the row-by-row filling onto the column filling."""
    lam = normalize(lam)
    rows = column_tableau(lam)
    images = [x for row in rows for x in row]
    return Permutation(images)


def symmetrizer_matrix(S: Symmetry, lam) -> Matrix:
    """``rho_S(c_lambda) rho_S(w) rho_S(r_0)`` with ``r_lambda = w r_0 w^-1``.

    Equals ``rho_S(p_lambda) rho_S(w)`` up to a nonzero scalar, so it has the
    same image as ``rho_S(p_lambda)``.
    """
    lam = normalize(lam)
    m = sum(lam)
    S.check_cap(m)
    c = _block_projector(S, conjugate(lam), "-")
    r0 = _block_projector(S, lam, "+")
    w = S.rho(m, _row_layout(lam))
    return c @ w @ r0


def schur_dim(S: Symmetry, lam) -> int:
    """``dim V_lambda`` as the rank of ``rho_S(p_lambda)``."""
    lam = normalize(lam)
    if not lam:
        return 1
    return mat_rank(symmetrizer_matrix(S, lam))


def schur_basis(S: Symmetry, lam) -> Matrix:
    """Columns spanning ``V_lambda`` inside ``T^m(V)``."""
    return column_space(symmetrizer_matrix(S, normalize(lam)))


def isotypic_dim(S: Symmetry, lam) -> int:
    """Rank of ``rho_S`` of the central idempotent of ``lambda``."""
    lam = normalize(lam)
    if not lam:
        return 1
    S.check_cap(sum(lam))
    return mat_rank(central_idempotent(lam).represent(S))


# Schur polynomials ------------------------------------------------------------------

def _zero_like(x):
    return x * 0


def complete_from_elementary(e, K: int) -> list:
    """``h_0..h_K`` from ``e_0..e_p`` by ``h_k = sum_i (-1)^(i-1) e_i h_(k-i)``."""
    one = e[0]
    h = [one]
    for k in range(1, K + 1):
        acc = _zero_like(one)
        for i in range(1, min(k, len(e) - 1) + 1):
            term = e[i] * h[k - i]
            acc = acc + term if i % 2 else acc - term
        h.append(acc)
    return h


def _det(rows):
    """Determinant by elimination over any field-like scalars."""
    a = [list(r) for r in rows]
    size = len(a)
    if size == 0:
        return 1
    det = a[0][0] * 0 + 1
    exact = not isinstance(a[0][0], float)
    for col in range(size):
        if exact:
            piv = next((r for r in range(col, size) if a[r][col] != 0), None)
        else:
            piv = max(range(col, size), key=lambda r: abs(a[r][col]))
            if abs(a[piv][col]) < 1e-300:
                piv = None
        if piv is None:
            return det * 0
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        det = det * a[col][col]
        for r in range(col + 1, size):
            if a[r][col] != 0:
                f = a[r][col] / a[col][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return det


def schur_from_elementary(lam, e):
    """Jacobi-Trudi ``det(h_(lambda_i - i + j))`` with ``h`` built from ``e``."""
    lam = normalize(lam)
    e = [Fraction(x) if isinstance(x, int) else x for x in e]
    if not lam:
        return e[0]
    h = complete_from_elementary(e, lam[0] + len(lam))
    zero = _zero_like(e[0])

    def hh(k):
        return h[k] if k >= 0 else zero

    ell = len(lam)
    return _det([[hh(lam[i] - i + j) for j in range(ell)] for i in range(ell)])


def schur_poly(lam, alpha):
    """``s_lambda(alpha_1, ..., alpha_p)``."""
    from .poincare import elementary_from_alpha

    alpha = [a if isinstance(a, (QuadScalar, float)) else QuadScalar.coerce(a) for a in alpha]
    return schur_from_elementary(lam, elementary_from_alpha(alpha))


def semistandard_weights(lam, p: int) -> list[tuple[int, ...]]:
    """Content vectors of the semistandard tableaux of shape ``lambda`` in
    entries ``1..p``: the diagonal weights of the classical ``GL(p)`` module."""
    lam = normalize(lam)
    cells = [(i, j) for i, row in enumerate(lam) for j in range(row)]
    out = []
    fill: dict = {}

    def rec(k):
        if k == len(cells):
            w = [0] * p
            for v in fill.values():
                w[v - 1] += 1
            out.append(tuple(w))
            return
        i, j = cells[k]
        lo = 1
        if j > 0:
            lo = max(lo, fill[(i, j - 1)])
        if i > 0:
            lo = max(lo, fill[(i - 1, j)] + 1)
        for v in range(lo, p + 1):
            fill[(i, j)] = v
            rec(k + 1)
        fill.pop((i, j), None)

    rec(0)
    return out


# induced symmetry and the root conjecture ----------------------------------------------

@dataclass
class Conjecture34Report:
    lam: tuple
    dim: int
    closes: bool
    induced_minus: list
    induced_rank: int | None
    predicted_minus: list
    roots: list
    weights: list
    agree: bool
    notes: list = field(default_factory=list)

    def to_json(self) -> dict:
        def enc(x):
            return x.to_json() if isinstance(x, QuadScalar) else x

        return {
            "lambda": list(self.lam),
            "dim": self.dim,
            "closes": self.closes,
            "induced_minus": [enc(x) for x in self.induced_minus],
            "induced_rank": self.induced_rank,
            "predicted_minus": [enc(x) for x in self.predicted_minus],
            "roots": [float(x) for x in self.roots],
            "weights": [float(x) for x in self.weights],
            "agree": self.agree,
            "notes": list(self.notes),
        }


def block_swap(m: int) -> Permutation:
    """Permutation of ``2m`` points exchanging the first and second halves."""
    return Permutation([k + m for k in range(1, m + 1)] + list(range(1, m + 1)))


def induced_symmetry(S: Symmetry, lam, K: int = 4):
    """The block swap ``V_lambda (x) V_lambda -> V_lambda (x) V_lambda`` and a
    comparison of its skew Poincare roots with the classical weights.

    Returns ``(matrix, report)``; the report never asserts the conjecture.
    """
    from .poincare import classify, poincare_series, roots_alpha, trace_wedge_dims

    lam = normalize(lam)
    m = sum(lam)
    base = poincare_series(S, max(3, S.n), plus_K=2)
    if base.classification != "even":
        raise PartitionError("the root comparison needs an even symmetry")
    p = base.rank
    if len(lam) > p:
        raise PartitionError(f"length {len(lam)} exceeds rank {p}")
    B = schur_basis(S, lam)
    dim = B.cols
    if dim == 0:
        raise PartitionError(f"V_{lam} is zero")
    BB = kron(B, B)
    moved = S.rho(2 * m, block_swap(m)) @ BB
    sol = linear_solve(BB, moved)
    notes = []
    if not sol.consistent:
        return None, Conjecture34Report(lam, dim, False, [], None, [], [], [], False,
                                        ["block swap leaves V_lambda (x) V_lambda"])
    R = sol.particular
    report = verify_matrix(R.to_float(), dim) if dim > 4 else None
    induced = Symmetry(R, dim, kind="induced", report=report)
    plus, minus = trace_wedge_dims(induced, K)
    minus_vals = [int(x.rational_part) if isinstance(x, QuadScalar) and x.is_rational()
                  else x for x in minus]
    alpha = roots_alpha(base)
    weights = []
    for wt in semistandard_weights(lam, p):
        val = 1.0
        for a, k in zip(alpha, wt):
            val *= float(a) ** k
        weights.append(val)
    weights.sort()
    # predicted P_-(t) = prod (1 + w t)
    coeffs = np.array([1.0])
    for w in weights:
        coeffs = np.convolve(coeffs, [1.0, w])
    predicted = [float(x) for x in coeffs] + [0.0] * max(0, K + 1 - len(coeffs))
    induced_rank = None
    roots: list = []
    seq = [float(x) for x in minus_vals]
    last = max((k for k, v in enumerate(seq) if abs(v) > 1e-9), default=0)
    if last < K and all(abs(v) < 1e-9 for v in seq[last + 1:]):
        induced_rank = last
        # P_-(t) = prod (1 + a t): the a's are -1/root
        poly = np.array(seq[:last + 1][::-1])
        roots = sorted(float(np.real(-1.0 / r)) for r in np.roots(poly)) if last else []
    else:
        notes.append(f"skew series of V_lambda does not terminate by degree {K}")
    compare = min(K + 1, len(predicted))
    agree = all(abs(seq[k] - predicted[k]) < 1e-6 * max(1.0, abs(predicted[k]))
                for k in range(compare))
    if induced_rank is not None and induced_rank != len(weights):
        agree = False
    return R, Conjecture34Report(lam, dim, True, minus_vals, induced_rank,
                                 predicted[:K + 1], roots, weights, agree, notes)
