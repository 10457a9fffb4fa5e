"""Command-line front end.

Subcommands cover the spectral engine, the conservation battery, the
change-of-variables checks, the Born-Oppenheimer analysis, the
grid-oracle cross-validation, the molecular potential curve, and a
bundled verify-all sweep.  Output is deterministic JSON (or CSV for
tables); exit status 0 = success, 1 = a named verification failure,
2 = bad input.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from fractions import Fraction
from typing import List, Optional

from . import __version__
from .model import (Case, CaseError, Params, case_variables, ground_state,
                    nu_coefficients, params_from_json, validate_case)
from . import integrals as integrals_mod
from . import numerics, sepvar, spectra


class VerificationFailure(RuntimeError):
    """Raised when a named invariant fails; .args[0] names it."""


_INF = "__infinite__"   # sentinel distinguishing an explicit 'inf' flag


def _parse_fraction(text: str):
    if text in ("inf", "infinite", "none"):
        return _INF
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as e:
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from e


def parse_range(text: str) -> List[Fraction]:
    """lo:hi:step (inclusive endpoints up to rounding) or a single value."""
    parts = text.split(":")
    if len(parts) == 1:
        return [Fraction(parts[0])]
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(
            f"range must be lo:hi:step, got {text!r}")
    lo, hi, step = (Fraction(t) for t in parts)
    if step <= 0 or hi < lo:
        raise argparse.ArgumentTypeError("need step > 0 and hi >= lo")
    out, v = [], lo
    while v <= hi:
        out.append(v)
        v += step
    return out


def _add_param_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--params", metavar="FILE",
                     help="JSON parameter file; flags below override it")
    sub.add_argument("--case", choices=[c.value for c in Case])
    for name in ("m1", "m2", "m3"):
        sub.add_argument(f"--{name}", type=_parse_fraction,
                         help=f"mass {name} (rational or 'inf')")
    for name in ("a", "b", "c", "omega", "A", "A12", "A13", "A23", "rho23"):
        sub.add_argument(f"--{name}", type=_parse_fraction)
    sub.add_argument("--d", type=int, help="space dimension")
    sub.add_argument("--N", type=int, help="polynomial degree cap / level")
    sub.add_argument("--seed", type=int, default=0)


def _build_params(args, default_case: Optional[Case] = None,
                  overrides: Optional[dict] = None):
    case = default_case
    kwargs = {}
    if args.params:
        with open(args.params) as fh:
            data = json.load(fh)
        case, base = params_from_json(data)
        kwargs = {f: getattr(base, f) for f in
                  ("m1", "m2", "m3", "a", "b", "c", "omega", "d",
                   "A12", "A13", "A23", "A", "N", "rho23")}
    if args.case:
        case = Case(args.case)
    if case is None:
        raise CaseError("no case given (use --case or --params)")
    if overrides:
        kwargs.update(overrides)
    for f in ("m1", "m2", "m3", "a", "b", "c", "omega", "d",
              "A12", "A13", "A23", "A", "N", "rho23"):
        v = getattr(args, f, None)
        if v is not None:
            kwargs[f] = None if v is _INF else v
    p = Params(**kwargs)
    validate_case(case, p)
    return case, p


def _fr_str(x) -> Optional[str]:
    if x is None:
        return None
    return f"{x.numerator}/{x.denominator}"


def _params_json(case: Case, p: Params) -> dict:
    return {"case": case.value,
            "m": [_fr_str(m) or "inf" for m in p.masses],
            "springs": [_fr_str(p.a), _fr_str(p.b), _fr_str(p.c)],
            "omega": _fr_str(p.omega), "d": p.d, "N": p.N,
            "A": _fr_str(p.A),
            "A12": _fr_str(p.A12), "A13": _fr_str(p.A13),
            "A23": _fr_str(p.A23), "rho23": _fr_str(p.rho23)}


def _emit(args, case, p, results) -> None:
    doc = {"tool_version": __version__,
           "command": args.command,
           "params": _params_json(case, p),
           "seed": getattr(args, "seed", 0),
           "results": results}
    json.dump(doc, sys.stdout, sort_keys=True, indent=2)
    sys.stdout.write("\n")


# ---------------------------------------------------------------------------
# subcommands

def cmd_spectrum(args) -> None:
    case, p = _build_params(args)
    if p.N is None:
        raise CaseError("spectrum needs --N")
    if case is Case.TWO_BODY_QES:
        rep = spectra.qes_2body_block(p)
    else:
        rep = spectra.spectrum(case, p, p.N)
    _emit(args, case, p, rep.to_json())


def cmd_integrals(args) -> None:
    case, p = _build_params(args, Case.GENERAL3)
    rep = integrals_mod.battery(p)
    _emit(args, case, p, rep.to_json())
    if not rep.consistent:
        raise VerificationFailure(
            "conservation-battery: " + ", ".join(rep.failures()))


def cmd_sepvar(args) -> None:
    case, p = _build_params(args, Case.GENERAL3)
    ok = sepvar.verify_pushforward(p, seed=args.seed, n_points=args.points)
    form = sepvar.match_separated_template(sepvar.build_opham(p), p)
    pot = sepvar.potential_in_w(p)
    results = {"pushforward_ok": ok,
               "A": _fr_str(form.A), "B": _fr_str(form.B),
               "potential": pot.to_json()}
    _emit(args, case, p, results)
    if not ok:
        raise VerificationFailure("w-coordinate-pushforward")


def cmd_bo(args) -> None:
    case, p = _build_params(args, Case.GENERAL3)
    grid = None
    if args.m1_grid:
        grid = parse_range(args.m1_grid)
    rep = numerics.bo_report_with_fit(
        p, grid if grid is not None else numerics.DEFAULT_FIT_GRID)
    _emit(args, case, p, rep.to_json())


def cmd_qes(args) -> None:
    args.case = args.case or Case.TWO_BODY_QES.value
    case, p = _build_params(args)
    if p.N is None:
        raise CaseError("qes needs --N")
    rep = spectra.qes_2body_block(p)
    algebraic = sorted(ev.approx() for ev in rep.physical)
    fd = numerics.fd_two_body_energies(p, case, k=len(algebraic),
                                       npoints=args.npoints)
    rel = [abs(x - y) / max(1.0, abs(x)) for x, y in zip(algebraic, fd)]
    ok = all(r <= args.rtol for r in rel)
    _emit(args, case, p, {"algebraic": [float(x) for x in algebraic],
                          "grid_oracle": [float(x) for x in fd],
                          "relative_error": [float(r) for r in rel],
                          "rtol": args.rtol, "agree": ok})
    if not ok:
        raise VerificationFailure("qes-grid-cross-validation")


def cmd_curve(args) -> None:
    case, p = _build_params(args, Case.MOLECULAR3,
                            overrides={"m2": None, "m3": None,
                                       "c": Fraction(0),
                                       "rho23": Fraction(1)})
    values = parse_range(args.rho23_range)
    rows = numerics.potential_curve(p, values)
    if args.format == "csv":
        sys.stdout.write(numerics.curve_csv(rows))
        return
    _emit(args, case, p, {"rows": [[_fr_str(r), _fr_str(e)]
                                   for r, e in rows]})


def cmd_verify_all(args) -> None:
    case, p = _build_params(args, Case.GENERAL3)
    checks = {}

    def run(name, fn):
        ok = bool(fn())
        checks[name] = ok
        if not ok:
            raise VerificationFailure(name)

    for c in (Case.GENERAL3, Case.EQUAL_MASS3, Case.ISOTROPIC3,
              Case.TWO_BODY_ES):
        q = _specialize(p, c)
        run(f"ground-state-annihilation-{c.value}",
            lambda q=q, c=c: spectra.case_operator(c, q).apply(
                _one(c)).is_zero())
    run("conservation-battery",
        lambda: integrals_mod.battery(p).consistent)
    run("w-coordinate-pushforward",
        lambda: sepvar.verify_pushforward(p, seed=args.seed, n_points=50))
    run("harmonic-2body-spectrum", _check_es_spectrum)
    run("qes-grid-cross-validation", lambda: _check_qes(p))
    run("bo-series-coefficients", lambda: _check_bo(p))
    run("molecular-curve-linearity", _check_curve)
    _emit(args, case, p, {"checks": checks, "all_ok": True})


def _one(case: Case):
    from .exact import MultiPoly
    return MultiPoly.const(case_variables(case), Fraction(1))


def _specialize(p: Params, case: Case) -> Params:
    if case is Case.EQUAL_MASS3:
        return replace(p, m2=p.m1, m3=p.m1)
    if case is Case.ISOTROPIC3:
        return replace(p, m2=p.m1, m3=p.m1, b=p.a, c=p.a)
    if case is Case.TWO_BODY_ES:
        return Params(m1=p.m1, m2=p.m1, omega=p.omega, d=p.d)
    return p


def _check_es_spectrum() -> bool:
    p = Params(m1=1, m2=1, omega=1, d=3)
    rep = spectra.spectrum(Case.TWO_BODY_ES, p, 5)
    want = sorted(Fraction(4 * n) for n in range(6))
    got = sorted(ev.value for ev in rep.gauged)
    return got == want


def _check_qes(p: Params) -> bool:
    q = Params(m1=1, m2=1, omega=p.omega, d=3, A=1, N=1)
    rep = spectra.qes_2body_block(q)
    algebraic = sorted(ev.approx() for ev in rep.physical)
    fd = numerics.fd_two_body_energies(q, Case.TWO_BODY_QES,
                                       k=len(algebraic))
    return all(abs(x - y) / max(1.0, abs(x)) <= 1e-6
               for x, y in zip(algebraic, fd))


def _check_bo(p: Params) -> bool:
    q = Params(m1=Fraction(1, 100), m2=1, m3=1, a=p.a, b=p.b,
               c=p.c if p.c != 0 else Fraction(1), omega=p.omega, d=p.d)
    rep = numerics.bo_report_with_fit(q, numerics.DEFAULT_FIT_GRID)
    return (abs(rep.c1_fit - rep.c1_exact) <= 1e-4 * max(1, abs(rep.c1_exact))
            and abs(rep.c2_fit - rep.c2_exact)
            <= 1e-3 * max(1, abs(rep.c2_exact)))


def _check_curve() -> bool:
    p = Params(m1=1, m2=None, m3=None, c=0, rho23=Fraction(1), d=3)
    rows = numerics.potential_curve(
        p, [Fraction(k, 2) for k in range(7)])
    second = [rows[i + 2][1] - 2 * rows[i + 1][1] + rows[i][1]
              for i in range(len(rows) - 2)]
    return all(s == 0 for s in second)


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="oscchain",
        description="Exact spectral engine for closed chains of three "
                    "harmonically coupled particles.")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    sp_ = sub.add_parser("spectrum", help="exact finite spectrum on P_N")
    _add_param_flags(sp_)
    sp_.set_defaults(func=cmd_spectrum)

    ig = sub.add_parser("integrals", help="conservation battery")
    _add_param_flags(ig)
    ig.set_defaults(func=cmd_integrals)

    sv = sub.add_parser("sepvar", help="w-coordinate verification")
    _add_param_flags(sv)
    sv.add_argument("--points", type=int, default=50)
    sv.set_defaults(func=cmd_sepvar)

    bo = sub.add_parser("bo", help="Born-Oppenheimer gap analysis")
    _add_param_flags(bo)
    bo.add_argument("--m1-grid", metavar="LO:HI:STEP")
    bo.set_defaults(func=cmd_bo)

    qes = sub.add_parser("qes", help="algebraic vs grid-oracle energies")
    _add_param_flags(qes)
    qes.add_argument("--rtol", type=float, default=1e-6)
    qes.add_argument("--npoints", type=int, default=4000)
    qes.set_defaults(func=cmd_qes)

    cv = sub.add_parser("curve", help="molecular potential curve table")
    _add_param_flags(cv)
    cv.add_argument("--rho23-range", default="0:3:1/2", metavar="LO:HI:STEP")
    cv.add_argument("--format", choices=("json", "csv"), default="json")
    cv.set_defaults(func=cmd_curve)

    va = sub.add_parser("verify-all", help="bundled invariant sweep")
    _add_param_flags(va)
    va.set_defaults(func=cmd_verify_all)
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        args.func(args)
    except VerificationFailure as e:
        print(f"verification failed: {e.args[0]}", file=sys.stderr)
        return 1
    except (CaseError, ValueError, OSError, json.JSONDecodeError) as e:
        print(f"input error: {e}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
