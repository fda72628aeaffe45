"""Command-line front end: ``swlab <command> ...``.

Exit status is 0 on success, 1 when a verification fails and 2 on usage or
input errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import exactnum, symmetry
from .exactnum import DimensionCapError, FieldError, Matrix, QuadScalar

FIXTURES = ("n3-plus", "n3-minus", "glued", "super-0", "super-1",
            "classical-2", "classical-3", "noncentral")


class UsageError(Exception):
    pass


class VerificationFailed(Exception):
    pass


# encoding -------------------------------------------------------------------

def enc_scalar(x):
    if isinstance(x, QuadScalar):
        return x.to_json()
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (np.floating, float)):
        return float(x)
    return x


def enc_matrix(M: Matrix):
    if M.is_exact:
        return [[x.to_json() for x in row] for row in M.tolist()]
    return M.to_numpy().tolist()


def _part_key(nu) -> str:
    return ",".join(map(str, nu)) if nu else "0"


def dump(obj, out: str | None):
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if out:
        Path(out).write_text(text, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(text)


def parse_partition(text: str):
    from .schurweyl import PartitionError, normalize

    try:
        return normalize(text)
    except (PartitionError, ValueError) as exc:
        raise UsageError(f"bad partition {text!r}: {exc}") from exc


def parse_ints(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise UsageError(f"expected a comma list of integers, got {text!r}") from exc


# fixtures --------------------------------------------------------------------

def make_fixture(name: str):
    from .symmetry import (build_rank2, classical_pair, flip, glue, noncentral_n3,
                           skew_diagonal_n3, super_example)

    if name == "n3-plus":
        return build_rank2(*skew_diagonal_n3(1, 1, "plus"))
    if name == "n3-minus":
        return build_rank2(*skew_diagonal_n3(1, 1, "minus"))
    if name == "glued":
        return glue(build_rank2(*classical_pair()), build_rank2(*skew_diagonal_n3(1, 1, "plus")))
    if name == "super-0":
        return super_example(0)
    if name == "super-1":
        return super_example(1)
    if name == "classical-2":
        return build_rank2(*classical_pair())
    if name == "classical-3":
        return flip(3)
    if name == "noncentral":
        return build_rank2(*noncentral_n3("plus"))
    raise UsageError(f"unknown fixture {name!r}; choose from {', '.join(FIXTURES)}")


def _read_json(path: str) -> dict:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed JSON in {path}: {exc}") from exc
    if not isinstance(data, dict) or "dim" not in data:
        raise UsageError(f"{path} is not a symmetry fixture (missing 'dim')")
    return data


def _raw_operator(data: dict) -> tuple[Matrix, int]:
    """The operator matrix of a fixture without running any checks."""
    n = int(data["dim"])
    d = int(data.get("field", {}).get("d", 0))
    float_mode = data.get("mode") == "float"

    def dec(rows):
        if float_mode:
            return Matrix.from_float(np.array(rows, dtype=float))
        return Matrix.from_rows([[QuadScalar.from_json(x, d) for x in r] for r in rows])

    if "S" in data:
        return dec(data["S"]), n
    if "u" in data and "v" in data:
        from .symmetry import _vec

        u, v = dec(data["u"]), dec(data["v"])
        S = Matrix.identity(n * n, u.mode) - (_vec(v) @ _vec(u).T).scale(2)
        return S, n
    raise UsageError("fixture needs either 'S' or 'u' and 'v'")


def load_symmetry(path: str, to_float: bool = False):
    from .symmetry import Symmetry, SymmetryError

    data = _read_json(path)
    try:
        S = Symmetry.from_json(data)
    except SymmetryError as exc:
        raise VerificationFailed(str(exc)) from exc
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"invalid fixture {path}: {exc}") from exc
    return S.to_float() if to_float else S


# commands ----------------------------------------------------------------------

def cmd_verify(args):
    from .symmetry import verify_matrix

    data = _read_json(args.input)
    try:
        S, n = _raw_operator(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"invalid fixture {args.input}: {exc}") from exc
    if args.float:
        S = S.to_float()
    if S.shape != (n * n, n * n):
        raise UsageError(f"operator shape {S.shape} does not match dim {n}")
    rep = verify_matrix(S, n)
    out = {"dim": n, "kind": data.get("kind", "custom"), "mode": S.mode,
           "field": {"d": S.d}, **rep.to_json()}
    out["residuals"] = {k: float(v) for k, v in sorted(rep.residuals.items())}
    dump(out, args.output)
    return 0 if rep.ok else 1


def cmd_poincare(args):
    from .poincare import poincare_series, trace_wedge_dims

    S = load_symmetry(args.input, args.float)
    data = poincare_series(S, args.K, plus_K=args.plus_K)
    out = data.to_json()
    out["K"] = args.K
    plus_t, minus_t = trace_wedge_dims(S, args.K)

    def as_num(x):
        return float(x) if not isinstance(x, QuadScalar) else (
            int(x.rational_part) if x.is_rational() and x.rational_part.denominator == 1
            else float(x))

    out["trace_minus"] = [as_num(x) for x in minus_t]
    out["trace_plus"] = [as_num(x) for x in plus_t]
    agree = all(abs(float(a) - b) < 1e-6 for a, b in zip(data.minus_coeffs, out["trace_minus"]))
    agree = agree and all(abs(float(a) - b) < 1e-6
                          for a, b in zip(data.plus_coeffs, out["trace_plus"]))
    out["trace_agree"] = agree
    out["field"] = {"d": S.d}
    dump(out, args.output)
    return 0 if agree and data.pp_holds else 1


def cmd_det(args):
    from .poincare import PoincareError, centrality, determinant_pair, mn_report

    S = load_symmetry(args.input, args.float)
    try:
        dp = determinant_pair(S)
    except PoincareError as exc:
        raise UsageError(str(exc)) from exc
    mn = mn_report(S, dp)
    cen = centrality(S)
    out = {
        "p": dp.p, "field": {"d": S.d},
        "v": [enc_scalar(x) for x in dp.v.entries()],
        "u": [enc_scalar(x) for x in dp.u.entries()],
        "u_dot_v": enc_scalar(dp.contraction()),
        "M": enc_matrix(mn.M), "N": enc_matrix(mn.N),
        "prod_ok": mn.prod_ok, "com_ok": mn.com_ok,
        "central": cen.central, "centrality_left": enc_matrix(cen.left),
        "centrality_right": enc_matrix(cen.right),
    }
    dump(out, args.output)
    return 0 if mn.prod_ok and mn.com_ok else 1


def cmd_dual(args):
    from .poincare import NotInvertibleByColumn, dual_report, dual_tensors

    S = load_symmetry(args.input, args.float)
    try:
        dt = dual_tensors(S)
    except NotInvertibleByColumn as exc:
        raise UsageError(str(exc)) from exc
    rep = dual_report(S)
    out = {
        "field": {"d": S.d},
        "C": enc_matrix(dt.C), "B": enc_matrix(dt.B),
        "Cdet": enc_matrix(dt.Cdet) if dt.Cdet is not None else None,
        "trace": enc_scalar(dt.trace),
        "defining_identity": rep.defining_identity, "bc_identity": rep.bc_identity,
        "trace_equals_rank": rep.trace_equals_rank,
        "c_equals_p_cdet": rep.c_equals_p_cdet, "b_equals_p_cdet": rep.b_equals_p_cdet,
    }
    dump(out, args.output)
    return 0 if rep.defining_identity and rep.bc_identity else 1


def _even_e(S):
    from .poincare import PoincareError, _even_data

    try:
        data = _even_data(S)
    except PoincareError as exc:
        raise UsageError(str(exc)) from exc
    return [Fraction(x) for x in data.minus_coeffs[:data.rank + 1]], data.rank


def cmd_schur_dim(args):
    from .schurweyl import schur_dim, schur_from_elementary

    S = load_symmetry(args.input, args.float)
    lam = parse_partition(args.lam)
    e, p = _even_e(S)
    numeric = schur_dim(S, lam)
    analytic = schur_from_elementary(lam, e)
    out = {"lambda": list(lam), "p": p, "dim_numeric": numeric,
           "dim_schur": enc_scalar(analytic) if not isinstance(analytic, Fraction)
           else (int(analytic) if analytic.denominator == 1 else str(analytic)),
           "agree": analytic == numeric}
    dump(out, args.output)
    return 0 if out["agree"] else 1


def cmd_fusion(args):
    from math import comb

    from .fusion import dim_check, fuse
    from .schurweyl import PartitionError

    lam, mu = parse_partition(args.lam), parse_partition(args.mu)
    central = True
    if args.input:
        S = load_symmetry(args.input, args.float)
        from .poincare import centrality

        e, p = _even_e(S)
        if args.p is not None and args.p != p:
            raise UsageError(f"-p {args.p} does not match the fixture rank {p}")
        central = centrality(S).central
    else:
        if args.p is None:
            raise UsageError("give -p or a fixture with -i")
        p = args.p
        e = [Fraction(x) for x in parse_ints(args.e)] if args.e else [Fraction(comb(p, k)) for k in range(p + 1)]
    try:
        res = fuse(lam, mu, p, central=central)
    except PartitionError as exc:
        raise UsageError(str(exc)) from exc
    out = res.to_json()
    out["central"] = central
    if not central:
        out["reduced"] = {}
        out["note"] = "determinant is not central; reduction refused"
    chk = dim_check(lam, mu, p, e=e)
    out.update(chk.to_json())
    dump(out, args.output)
    return 0 if chk.consistent else 1


def cmd_casimir(args):
    from .schurweyl import gamma
    from .twistlie import (LieAxiomError, casimir_eigenvalue, casimir_on_component,
                           casimir_sl_eigenvalue)

    lam = parse_partition(args.lam)
    scalar_check = None
    if args.input:
        S = load_symmetry(args.input, args.float)
        _, p = _even_e(S)
        try:
            c = casimir_on_component(S, lam, p)
            scalar_check = bool(abs(float(c) - float(casimir_eigenvalue(lam, p))) < 1e-9)
        except LieAxiomError:
            scalar_check = False
    elif args.p is not None:
        p = args.p
    else:
        raise UsageError("give -p or a fixture with -i")
    out = {"lambda": list(lam), "m": sum(lam), "p": p, "gamma": str(gamma(lam)),
           "eig_gl": str(casimir_eigenvalue(lam, p)),
           "eig_sl": str(casimir_sl_eigenvalue(lam, p)) if p >= 2 else None,
           "scalar_check": scalar_check}
    dump(out, args.output)
    return 1 if scalar_check is False else 0


def _write_csv(text: str, path: str | None):
    if path:
        Path(path).write_text(text, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(text)


def cmd_spectrum(args):
    from .spectra import SpectrumError, hyperboloid_spectrum, orbit_spectrum_cpn, table_csv

    try:
        if args.model == "hyperboloid":
            if args.n is None:
                raise UsageError("--n is required for the hyperboloid model")
            table = hyperboloid_spectrum(args.n, args.L)
        else:
            if args.p is None or not args.e:
                raise UsageError("the cpn model needs -p and --e")
            table = orbit_spectrum_cpn(args.p, e=parse_ints(args.e), L=args.L)
    except SpectrumError as exc:
        raise UsageError(str(exc)) from exc
    if args.format == "csv" or args.csv:
        _write_csv(table_csv(table), args.csv or args.output)
        if args.format != "csv":
            dump(table.to_json(), args.output)
    else:
        dump(table.to_json(), args.output)
    return 0


def cmd_weyl(args):
    from .spectra import SpectrumError, hyperboloid_spectrum, table_csv, weyl_fit

    try:
        table = hyperboloid_spectrum(args.n, args.L + 1)
        rep = weyl_fit(table, args.L)
    except SpectrumError as exc:
        raise UsageError(str(exc)) from exc
    if args.csv:
        _write_csv(table_csv(table), args.csv)
    dump(rep.to_json(), args.output)
    return 0


def cmd_make_fixture(args):
    S = make_fixture(args.name)
    dump(S.to_json(), args.output)
    return 0


# parser -------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="swlab", description=__doc__.splitlines()[0])
    ap.add_argument("--exact-m", type=int, help="largest exact tensor power (SWLAB_EXACT_M)")
    ap.add_argument("--float-m", type=int, help="largest float tensor power (SWLAB_FLOAT_M)")
    ap.add_argument("--tol", type=float, help="float tolerance (SWLAB_TOL)")
    sub = ap.add_subparsers(dest="command", required=True)

    def with_input(p, required=True):
        p.add_argument("-i", "--input", required=required, help="symmetry fixture (JSON)")
        p.add_argument("--float", action="store_true", help="run in float mode")
        p.add_argument("-o", "--output", help="write JSON here instead of stdout")
        return p

    p = with_input(sub.add_parser("verify", help="check the symmetry axioms"))
    p.set_defaults(func=cmd_verify)
    p = with_input(sub.add_parser("poincare", help="skew/symmetric Poincare series"))
    p.add_argument("-K", type=int, default=5)
    p.add_argument("--plus-K", type=int)
    p.set_defaults(func=cmd_poincare)
    p = with_input(sub.add_parser("det", help="determinant, M/N and centrality"))
    p.set_defaults(func=cmd_det)
    p = with_input(sub.add_parser("dual", help="column inverse and its contractions"))
    p.set_defaults(func=cmd_dual)
    p = with_input(sub.add_parser("schur-dim", help="dim V_lambda two ways"))
    p.add_argument("--lambda", dest="lam", required=True)
    p.set_defaults(func=cmd_schur_dim)
    p = with_input(sub.add_parser("fusion", help="fusion product with reduction"), required=False)
    p.add_argument("--lambda", dest="lam", required=True)
    p.add_argument("--mu", required=True)
    p.add_argument("-p", type=int)
    p.add_argument("--e", help="elementary symmetric values e_0..e_p (comma list)")
    p.set_defaults(func=cmd_fusion)
    p = with_input(sub.add_parser("casimir", help="Casimir eigenvalues on V_lambda"), required=False)
    p.add_argument("--lambda", dest="lam", required=True)
    p.add_argument("-p", type=int)
    p.set_defaults(func=cmd_casimir)
    p = sub.add_parser("spectrum", help="Casimir spectrum tables")
    p.add_argument("--model", choices=("hyperboloid", "cpn"), default="hyperboloid")
    p.add_argument("--n", type=int)
    p.add_argument("-p", type=int)
    p.add_argument("--e", help="elementary symmetric values e_0..e_p (comma list)")
    p.add_argument("-L", type=int, default=10)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--csv", help="also write the CSV table here")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_spectrum)
    p = sub.add_parser("weyl", help="growth of the counting function")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("-L", type=int, default=40)
    p.add_argument("--csv", help="write the spectrum table here")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_weyl)
    p = sub.add_parser("make-fixture", help="write a named fixture")
    p.add_argument("name", choices=FIXTURES)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_make_fixture)
    return ap


def run(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.exact_m is not None:
        if args.exact_m < 1:
            ap.error("--exact-m must be positive")
        symmetry.EXACT_M_CAP = args.exact_m
    if args.float_m is not None:
        if args.float_m < 1:
            ap.error("--float-m must be positive")
        symmetry.FLOAT_M_CAP = args.float_m
    if args.tol is not None:
        if not 0 < args.tol <= 1e-4:
            ap.error("--tol must lie in (0, 1e-4]")
        exactnum.FLOAT_TOL = args.tol
    try:
        return args.func(args)
    except VerificationFailed as exc:
        print(f"swlab: verification failed: {exc}", file=sys.stderr)
        return 1
    except UsageError as exc:
        print(f"swlab: {exc}", file=sys.stderr)
        return 2
    except DimensionCapError as exc:
        print(f"swlab: cap exceeded: {exc}", file=sys.stderr)
        return 2
    except FieldError as exc:
        print(f"swlab: field mismatch: {exc}", file=sys.stderr)
        return 2


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
