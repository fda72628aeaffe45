"""Casimir spectra on the twisted hyperboloid and on CP^n-type orbits, the
counting function N(lambda), and a probe of its growth.
"""
from __future__ import annotations

import bisect
import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .exactnum import QuadScalar
from .schurweyl import schur_from_elementary, schur_poly
from .twistlie import casimir_sl_eigenvalue


class SpectrumError(ValueError):
    pass


@dataclass
class SpectrumRow:
    l: int
    eigenvalue: Fraction
    multiplicity: int
    diagram: tuple = ()


@dataclass
class SpectrumTable:
    model: str
    rows: list[SpectrumRow]
    params: dict = field(default_factory=dict)

    def eigenvalues(self) -> list[Fraction]:
        return [r.eigenvalue for r in self.rows]

    def cumulative(self) -> list[int]:
        out, acc = [], 0
        for r in self.rows:
            acc += r.multiplicity
            out.append(acc)
        return out

    def to_json(self) -> dict:
        return {
            "model": self.model,
            "params": self.params,
            "rows": [{"l": r.l, "eigenvalue": str(r.eigenvalue),
                      "multiplicity": r.multiplicity, "diagram": list(r.diagram)}
                     for r in self.rows],
        }


def hyperboloid_alpha(n: int) -> tuple[QuadScalar, QuadScalar]:
    """Roots of ``t^2 - n t + 1``, smaller first."""
    disc = n * n - 4
    r = QuadScalar.sqrt(disc)
    return (QuadScalar(n) - r) / 2, (QuadScalar(n) + r) / 2


def multiplicity_closed_form(n: int, l: int) -> int:
    """``(a2^(2l+1) - a1^(2l+1)) / (a2 - a1)`` evaluated in the quadratic field."""
    a1, a2 = hyperboloid_alpha(n)
    val = (a2 ** (2 * l + 1) - a1 ** (2 * l + 1)) / (a2 - a1)
    if not val.is_rational() or val.rational_part.denominator != 1:
        raise SpectrumError(f"closed form is not an integer at l={l}: {val}")
    return int(val.rational_part)


def hyperboloid_multiplicities(n: int, L: int) -> list[int]:
    """``m_0..m_L`` via ``m_(l+1) = (n^2 - 2) m_l - m_(l-1)``."""
    ms = [1, n * n - 1]
    while len(ms) <= L:
        ms.append((n * n - 2) * ms[-1] - ms[-2])
    return ms[:L + 1]


def hyperboloid_spectrum(n: int, L: int) -> SpectrumTable:
    """Eigenvalues ``2l^2 + 2l`` with multiplicities ``dim V_(2l)``."""
    if n < 3:
        raise SpectrumError("n must be at least 3 (n = 2 is the classical hyperboloid)")
    if L < 0:
        raise SpectrumError("L must be non-negative")
    ms = hyperboloid_multiplicities(n, L)
    rows = [SpectrumRow(l, Fraction(2 * l * l + 2 * l), ms[l], (2 * l,) if l else ())
            for l in range(L + 1)]
    return SpectrumTable("hyperboloid", rows, {"n": n, "L": L})


def _as_integer(x, what: str) -> int:
    if isinstance(x, QuadScalar):
        if not x.is_rational() or x.rational_part.denominator != 1:
            raise SpectrumError(f"non-integral multiplicity for {what}: {x}")
        return int(x.rational_part)
    if isinstance(x, Fraction):
        if x.denominator != 1:
            raise SpectrumError(f"non-integral multiplicity for {what}: {x}")
        return int(x)
    r = round(float(x))
    if abs(float(x) - r) > 1e-6 * max(1.0, abs(float(x))):
        raise SpectrumError(f"non-integral multiplicity for {what}: {x}")
    return int(r)


def orbit_spectrum_cpn(p: int, alpha=None, L: int = 5, e=None) -> SpectrumTable:
    """Rows for the diagrams ``(2k, k^(p-2))``.

    Multiplicities are ``s_lambda(alpha)``; pass the elementary symmetric
    values ``e`` (the skew Poincare coefficients) to stay exact.
    """
    if p < 2:
        raise SpectrumError("p must be at least 2")
    if e is None:
        if alpha is None or len(alpha) != p:
            raise SpectrumError("alpha must have p entries")
        prod = 1.0
        for a in alpha:
            prod *= float(a)
        if abs(prod - 1.0) > 1e-9:
            raise SpectrumError("the product of alpha must be 1")
    else:
        e = [Fraction(x) if not isinstance(x, (QuadScalar, float)) else x for x in e]
        if len(e) != p + 1:
            raise SpectrumError("e must have p + 1 entries")
    rows = []
    for k in range(L + 1):
        lam = tuple(x for x in (2 * k,) + (k,) * (p - 2) if x)
        mult = schur_from_elementary(lam, e) if e is not None else schur_poly(lam, alpha)
        rows.append(SpectrumRow(k, casimir_sl_eigenvalue(lam, p) if lam else Fraction(0),
                                _as_integer(mult, str(lam)), lam))
    return SpectrumTable("cpn", rows, {"p": p, "L": L})


def count_N(table: SpectrumTable, lam) -> int:
    """Number of eigenvalues ``<= lam`` counted with multiplicity."""
    eig = table.eigenvalues()
    lam = Fraction(lam) if not isinstance(lam, float) else lam
    if lam > eig[-1]:
        raise SpectrumError(f"{lam} is beyond the tabulated range (last eigenvalue {eig[-1]})")
    idx = bisect.bisect_right(eig, lam)
    return table.cumulative()[idx - 1] if idx else 0


@dataclass
class AsymptoticsReport:
    n: int
    L: int
    log_alpha2: float
    log_r_at: list[float]
    log_r_below: list[float]
    beta_sup: float
    beta_inf: float
    ratio: float
    expected_ratio: float
    rel_change_at: float
    rel_change_below: float
    log_growth: list[float]        # log N / sqrt(2 lambda)
    polynomial_exponent: list[float]   # log N / log lambda
    cauchy_from_10: bool

    @property
    def ratio_rel_error(self) -> float:
        return abs(self.ratio - self.expected_ratio) / self.expected_ratio

    @property
    def growth_rel_error(self) -> float:
        return abs(self.log_growth[-1] - self.log_alpha2) / self.log_alpha2

    def to_json(self) -> dict:
        return {
            "n": self.n, "L": self.L,
            "alpha2": math.exp(self.log_alpha2),
            "beta_sup": self.beta_sup, "beta_inf": self.beta_inf,
            "ratio": self.ratio, "expected_ratio": self.expected_ratio,
            "ratio_rel_error": self.ratio_rel_error,
            "rel_change_at": self.rel_change_at, "rel_change_below": self.rel_change_below,
            "log_growth_last": self.log_growth[-1], "growth_rel_error": self.growth_rel_error,
            "polynomial_exponent_last": self.polynomial_exponent[-1],
            "cauchy_from_10": self.cauchy_from_10,
        }


def _rel_change(logs: list[float], window: int = 5) -> float:
    tail = logs[-(window + 1):]
    return max(abs(math.expm1(b - a)) for a, b in zip(tail, tail[1:]))


def weyl_fit(table: SpectrumTable, L: int | None = None) -> AsymptoticsReport:
    """Tail behaviour of ``N(lambda_l) / alpha2^sqrt(2 lambda)`` at an
    eigenvalue and just below the next one, all in logarithms."""
    if table.model != "hyperboloid":
        raise SpectrumError("weyl_fit needs the hyperboloid model")
    n = table.params["n"]
    L = table.params["L"] - 1 if L is None else L
    if L < 10 or L + 1 > table.params["L"]:
        raise SpectrumError("need L >= 10 and one extra tabulated row")
    log_a2 = math.log(float(hyperboloid_alpha(n)[1]))
    Ns = table.cumulative()
    eig = table.eigenvalues()
    log_at, log_below, growth, poly = [], [], [], []
    for l in range(1, L + 1):
        logN = math.log(Ns[l])
        s_here = math.sqrt(2 * eig[l])
        s_next = math.sqrt(2 * eig[l + 1])
        log_at.append(logN - s_here * log_a2)
        log_below.append(logN - s_next * log_a2)
        growth.append(logN / s_here)
        poly.append(logN / math.log(float(eig[l])))
    diffs = [abs(b - a) for a, b in zip(log_at, log_at[1:])]
    cauchy = all(d2 <= d1 for d1, d2 in zip(diffs[9:], diffs[10:]))
    return AsymptoticsReport(
        n=n, L=L, log_alpha2=log_a2, log_r_at=log_at, log_r_below=log_below,
        beta_sup=math.exp(log_at[-1]), beta_inf=math.exp(log_below[-1]),
        ratio=math.exp(log_at[-1] - log_below[-1]), expected_ratio=math.exp(2 * log_a2),
        rel_change_at=_rel_change(log_at), rel_change_below=_rel_change(log_below),
        log_growth=growth, polynomial_exponent=poly, cauchy_from_10=cauchy)


def table_csv(table: SpectrumTable) -> str:
    """CSV with columns l, eigenvalue, multiplicity, N, r_at, r_below."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    hyper = table.model == "hyperboloid"
    w.writerow(["l", "eigenvalue", "multiplicity", "N"] + (["r_at", "r_below"] if hyper else []))
    Ns = table.cumulative()
    log_a2 = math.log(float(hyperboloid_alpha(table.params["n"])[1])) if hyper else None
    for i, row in enumerate(table.rows):
        out = [row.l, str(row.eigenvalue), row.multiplicity, Ns[i]]
        if hyper:
            logN = math.log(Ns[i])
            out.append(f"{math.exp(logN - math.sqrt(2 * row.eigenvalue) * log_a2):.12g}")
            if i + 1 < len(table.rows):
                nxt = table.rows[i + 1].eigenvalue
                out.append(f"{math.exp(logN - math.sqrt(2 * nxt) * log_a2):.12g}")
            else:
                out.append("")
        w.writerow(out)
    return buf.getvalue()
