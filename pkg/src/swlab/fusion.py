"""Littlewood-Richardson coefficients and the rank-p fusion ring with the
reduction of full height-p columns."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .exactnum import QuadScalar
from .schurweyl import PartitionError, normalize, reduce_partition, schur_from_elementary


@lru_cache(maxsize=None)
def _lr(lam: tuple, mu: tuple) -> dict:
    # Fill the cells of mu row by row with entries appended to lam, requiring
    # the resulting skew tableau nu/lam to be semistandard with a lattice
    # reading word (right to left, top to bottom).
    results: dict = {}

    def rec(row, shape, placed, counts):
        # placed: dict cell -> entry for the skew part
        if row == len(mu):
            nu = tuple(x for x in shape if x)
            results[nu] = results.get(nu, 0) + 1
            return
        entry = row + 1
        k = mu[row]
        # choose how many of the k copies of `entry` go in each row r
        rows = len(shape) + 1

        def place(r, remaining, shape, placed, counts):
            if remaining == 0:
                if _lattice(shape, placed):
                    rec(row + 1, shape, placed, counts)
                return
            if r >= rows + k:
                return
            cur = list(shape) + [0] * (r + 1 - len(shape))
            # max copies in row r: limited by the row above and column strictness
            above = cur[r - 1] if r > 0 else 10 ** 9
            for c in range(min(remaining, above - cur[r]), -1, -1):
                new_shape = list(cur)
                new_placed = dict(placed)
                ok = True
                for j in range(cur[r], cur[r] + c):
                    # strictly increasing down columns
                    if r > 0 and (r - 1, j) in new_placed and new_placed[(r - 1, j)] >= entry:
                        ok = False
                        break
                    new_placed[(r, j)] = entry
                if not ok:
                    continue
                new_shape[r] = cur[r] + c
                place(r + 1, remaining - c, tuple(new_shape), new_placed, counts)

        place(0, k, shape, placed, counts)

    rec(0, tuple(lam), {}, None)
    return results


def _lattice(shape, placed) -> bool:
    counts: dict = {}
    for r in range(len(shape)):
        cols = sorted((j for (rr, j) in placed if rr == r), reverse=True)
        for j in cols:
            e = placed[(r, j)]
            counts[e] = counts.get(e, 0) + 1
            if e > 1 and counts[e] > counts.get(e - 1, 0):
                return False
    return True


def lr_coeffs(lam, mu) -> dict[tuple, int]:
    """``c^nu_{lambda mu}`` for every ``nu`` of weight ``|lambda| + |mu|``."""
    lam, mu = normalize(lam), normalize(mu)
    return dict(sorted(_lr(lam, mu).items(), reverse=True))


@dataclass
class FusionResult:
    lhs: tuple
    rhs: tuple
    p: int
    raw: dict
    terms: dict
    dropped: dict = field(default_factory=dict)
    reduced_applied: bool = True

    def to_json(self) -> dict:
        def key(nu):
            return ",".join(map(str, nu)) if nu else "0"

        return {
            "lhs": list(self.lhs), "rhs": list(self.rhs), "p": self.p,
            "raw": {key(k): v for k, v in self.raw.items()},
            "reduced": {key(k): v for k, v in self.terms.items()},
        }


def fuse(lam, mu, p: int, central: bool = True) -> FusionResult:
    """``[V_lambda][V_mu]`` in the rank-p fusion ring.

    With ``central=False`` no reduction is applied and the raw expansion is
    returned (diagrams longer than ``p`` are still dropped).
    """
    lam, mu = normalize(lam), normalize(mu)
    for x in (lam, mu):
        if len(x) > p:
            raise PartitionError(f"length of {x} exceeds rank {p}")
    raw = lr_coeffs(lam, mu)
    terms: dict = {}
    dropped: dict = {}
    for nu, c in raw.items():
        if len(nu) > p:
            dropped[nu] = c
            continue
        key = reduce_partition(nu, p) if central else nu
        terms[key] = terms.get(key, 0) + c
    terms = dict(sorted(terms.items(), reverse=True))
    return FusionResult(lam, mu, p, raw, terms, dropped, central)


@dataclass
class DimCheck:
    dim_lhs: object
    dim_rhs: object
    dim_product: object
    dim_sum: object
    consistent: bool

    def to_json(self) -> dict:
        def enc(x):
            if isinstance(x, QuadScalar) and x.is_rational():
                x = x.rational_part
            if isinstance(x, Fraction) and x.denominator == 1:
                return int(x)
            return x if isinstance(x, (int, float)) else str(x)

        return {"dim_lhs": enc(self.dim_lhs), "dim_rhs": enc(self.dim_rhs),
                "dim_sum": enc(self.dim_sum), "consistent": self.consistent}


def dim_check(lam, mu, p: int, e=None, alpha=None, tol: float = 1e-9) -> DimCheck:
    """Check ``s_lambda s_mu = sum mult(nu) s_nu`` at the given alphas (or at
    their elementary symmetric values ``e``)."""
    from .poincare import elementary_from_alpha

    if e is None:
        if alpha is None or len(alpha) != p:
            raise ValueError("alpha must have p entries")
        e = elementary_from_alpha(list(alpha))
    if len(e) != p + 1:
        raise ValueError("e must have p + 1 entries")
    res = fuse(lam, mu, p)

    def s(nu):
        return schur_from_elementary(nu, e)

    a, b = s(res.lhs), s(res.rhs)
    total = e[0] * 0
    for nu, c in res.terms.items():
        total = total + s(nu) * c
    prod = a * b
    if isinstance(prod, float) or isinstance(total, float):
        ok = abs(float(prod) - float(total)) <= tol * max(1.0, abs(float(prod)))
    else:
        ok = prod == total
    return DimCheck(a, b, prod, total, ok)
