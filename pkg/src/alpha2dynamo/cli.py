"""Command-line front end.

Exit status: 0 on success, 1 for invalid input, 2 when a numerical
procedure fails to converge.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path
from typing import Sequence

from . import comparison, criteria, dspec
from .besselspec import diagonal_spectrum, operator_eigenvalue, parse_theta
from .enclosure import ProblemConstants, boundary_polyline, right_bound_a, strip_outline
from .errors import ConvergenceError, DomainError
from .profiles import parse_profile, profile_to_dict


class UsageError(DomainError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(message)


def fmt(x: float) -> str:
    return format(float(x), ".12g")


def _num(x: float):
    x = float(x)
    if not math.isfinite(x):
        return None
    return float(fmt(x))


def _theta(args) -> float:
    return parse_theta(args.theta, args.l)


def _constants(args) -> ProblemConstants:
    theta = _theta(args)
    if args.profile is not None:
        if args.alpha_norm is not None or args.alpha_prime_norm is not None:
            raise UsageError("give either --profile or explicit norms, not both")
        return ProblemConstants.from_profile(args.l, theta, parse_profile(args.profile))
    if args.alpha_norm is None or args.alpha_prime_norm is None:
        raise UsageError("need --profile or both --alpha-norm and --alpha-prime-norm")
    return ProblemConstants.from_norms(args.l, theta, args.alpha_norm, args.alpha_prime_norm)


def _write_csv(path: str | None, header: Sequence[str], rows: list[Sequence], out) -> None:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    if path is None:
        out.write(buf.getvalue())
    else:
        Path(path).write_text(buf.getvalue())


def cmd_bessel_zeros(args, out) -> None:
    theta = _theta(args)
    if args.count < 1:
        raise UsageError("--count must be positive")
    for k in range(1, args.count + 1):
        out.write(fmt(operator_eigenvalue(args.l, theta, k)) + "\n")


def cmd_bounds(args, out) -> None:
    c = _constants(args)
    rb = right_bound_a(c)
    v = comparison.classify_pair(comparison.NormPair(c.alpha_norm, c.alpha_prime_norm), c)
    lines = [
        ("lam1_theta", fmt(c.lam1_theta)),
        ("lam1_inf", fmt(c.lam1_inf)),
        ("alpha_norm", fmt(c.alpha_norm)),
        ("alpha_prime_norm", fmt(c.alpha_prime_norm)),
        ("case", rb.case),
        ("a_theta", fmt(rb.a_theta)),
        ("s_theta", fmt(rb.s_theta)),
        ("b_theta", fmt(rb.b_theta)),
        ("relation", v.relation.value),
        ("region", v.region.value),
        ("subcritical_split", str(v.subcritical_split).lower()),
    ]
    for key, val in lines:
        out.write(f"{key}: {val}\n")


def cmd_enclosure(args, out) -> None:
    c = _constants(args)
    pts = boundary_polyline(c, args.xi_min, args.points)
    rows = [(fmt(x), fmt(y)) for x, y in pts]
    rows += [(fmt(x), fmt(-y)) for x, y in reversed(pts[:-1])]
    _write_csv(args.out, ("xi", "eta"), rows, out)
    strip_path = args.strip_out
    if strip_path is None and args.out is not None:
        p = Path(args.out)
        strip_path = str(p.with_name(p.stem + "_strip" + p.suffix))
    strip = strip_outline(c, args.xi_min)
    if strip_path is None:
        out.write("\n")
    srows = [(fmt(x), fmt(y)) for x, y in strip]
    srows += [(fmt(x), fmt(-y)) for x, y in reversed(strip[:-1])]
    _write_csv(strip_path, ("xi", "eta"), srows, out)


def _curve_or_blank(which: str, t: float, L: float, Li: float) -> str:
    try:
        return fmt(comparison.k_curve(which, t, L, Li))
    except DomainError:
        return ""


def _parse_grid(text: str) -> tuple[int, int]:
    parts = text.lower().replace("×", "x").split("x")
    try:
        nt, ns = (int(p) for p in parts)
    except ValueError:
        raise UsageError(f"--grid must look like 60x60, got {text!r}") from None
    if nt < 1 or ns < 1:
        raise UsageError("grid sizes must be positive")
    return nt, ns


def cmd_compare(args, out) -> None:
    c = ProblemConstants.from_norms(args.l, _theta(args), 0.0, 0.0)
    L, Li = c.lam1_theta, c.lam1_inf
    nt, ns = _parse_grid(args.grid)
    rows = []
    for t, s, v in comparison.comparison_grid(c, nt, ns):
        curves = [_curve_or_blank(w, t, L, Li) for w in ("1", "2", "3", "4minus", "4plus", "5")]
        rows.append([fmt(t), fmt(s), *curves, v.relation.value, v.region.value])
    _write_csv(args.out, ("t", "s", "k1", "k2", "k3", "k4m", "k4p", "k5", "verdict", "region"), rows, out)


def _snap_local(lam0: float, c: ProblemConstants) -> float:
    # printed eigenvalues carry 12 digits; accept them for the exact point
    pts = diagonal_spectrum(c.l, c.theta, min(4 * lam0, -1.0))
    best = min(pts, key=lambda p: abs(p - lam0))
    if abs(best - lam0) > 1e-9 * max(1.0, abs(lam0)):
        raise UsageError(f"--local {lam0} is not an eigenvalue of the uncoupled diagonal")
    return best


def cmd_check(args, out) -> None:
    c = _constants(args)
    reports = []
    if args.anti_dynamo:
        reports.append(criteria.anti_dynamo(c))
    if args.stable2:
        reports.append(criteria.stable2(c))
    if args.meet:
        reports.append(criteria.meet(c))
    if args.local is not None:
        reports.append(criteria.local_nonoscillation(_snap_local(args.local, c), c))
    if not reports:
        raise UsageError("choose at least one of --anti-dynamo, --stable2, --local, --meet")
    if args.format == "records":
        doc = [{"name": r.name, "lhs": _num(r.lhs), "rhs": _num(r.rhs), "margin": _num(r.margin),
                "verdict": "satisfied" if r.satisfied else "violated"} for r in reports]
        out.write(json.dumps(doc, indent=2) + "\n")
        return
    for r in reports:
        verdict = "satisfied" if r.satisfied else "violated"
        out.write(f"{r.name} lhs={fmt(r.lhs)} rhs={fmt(r.rhs)} margin={fmt(r.margin)} {verdict}\n")


def _bounds_record(c: ProblemConstants) -> dict:
    rb = right_bound_a(c)
    return {"a": _num(rb.a_theta), "s": _num(rb.s_theta), "b": _num(rb.b_theta), "case": rb.case,
            "alpha_norm": _num(c.alpha_norm), "alpha_prime_norm": _num(c.alpha_prime_norm)}


def _theta_label(theta: float) -> str:
    return "inf" if math.isinf(theta) else fmt(theta)


def cmd_spectrum(args, out) -> None:
    theta = _theta(args)
    profile = parse_profile(args.profile)
    res = dspec.spectrum(args.l, theta, profile, args.grid, args.count, args.tol, strict=False)
    if args.format == "records":
        c = ProblemConstants.from_profile(args.l, theta, profile)
        doc = {
            "l": args.l, "theta": _theta_label(theta), "profile": profile_to_dict(profile), "N": res.N,
            "eigenvalues": [{"re": _num(z.real), "im": _num(z.imag), "err": _num(e), "flags": {"converged": bool(ok)}}
                            for z, e, ok in zip(res.eigenvalues, res.convergence_err, res.converged)],
            "bounds": _bounds_record(c),
            "events": [],
        }
        out.write(json.dumps(doc, indent=2) + "\n")
        return
    rows = [(i, fmt(z.real), fmt(z.imag), fmt(e), str(bool(ok)).lower())
            for i, (z, e, ok) in enumerate(zip(res.eigenvalues, res.convergence_err, res.converged))]
    _write_csv(None, ("index", "re", "im", "err", "converged"), rows, out)


def _stefani_only(text: str) -> None:
    if text.strip().lower() != "stefani":
        raise UsageError("sweep scans the Stefani amplitude; use --profile stefani")


def cmd_sweep(args, out) -> None:
    _stefani_only(args.profile)
    theta = _theta(args)
    if args.c_step <= 0 or args.c_to < args.c_from:
        raise UsageError("need --c-step > 0 and --c-to >= --c-from")
    n = int(math.floor((args.c_to - args.c_from) / args.c_step + 1e-9)) + 1
    Cs = [round(args.c_from + i * args.c_step, 12) for i in range(n)]
    res = dspec.sweep_stefani(args.l, theta, Cs, args.grid, args.count, workers=args.workers)
    if args.format == "records":
        doc = {
            "l": args.l, "theta": _theta_label(theta), "profile": "stefani", "N": args.grid,
            "trajectory": [{"C": _num(C), "eigenvalues": [{"re": _num(z.real), "im": _num(z.imag), "err": _num(e)}
                                                           for z, e in zip(r.eigenvalues, r.convergence_err)]}
                           for C, r in zip(res.C_values, res.results)],
            "events": [{"kind": e.kind, "C": _num(e.C), "re": _num(e.value.real), "im": _num(e.value.imag)}
                       for e in res.events],
        }
        out.write(json.dumps(doc, indent=2) + "\n")
        return
    rows = []
    for C, r in zip(res.C_values, res.results):
        for i, (z, e) in enumerate(zip(r.eigenvalues, r.convergence_err)):
            rows.append((fmt(C), i, fmt(z.real), fmt(z.imag), fmt(e)))
    _write_csv(args.out, ("C", "index", "re", "im", "err"), rows, out)
    if args.out is None:
        out.write("\n")
    _write_csv(None, ("event", "C", "re", "im"),
               [(e.kind, fmt(e.C), fmt(e.value.real), fmt(e.value.imag)) for e in res.events], out)


def cmd_verify(args, out) -> None:
    theta = _theta(args)
    profile = parse_profile(args.profile)
    res = dspec.spectrum(args.l, theta, profile, args.grid, args.count, args.tol, strict=False)
    c = ProblemConstants.from_profile(args.l, theta, profile)
    s_spec = dspec.eig_symmetric(dspec.assemble_selfadjoint(args.l, theta, profile, res.N, c))
    report = dspec.verify_enclosure(res, c, s_spec)
    yes = lambda b: "pass" if b else "fail"
    rows = [(fmt(ch.value.real), fmt(ch.value.imag), fmt(ch.tau), yes(ch.in_sigma), yes(ch.strip),
             yes(ch.disc), yes(ch.combined)) for ch in report.checks]
    _write_csv(None, ("re", "im", "tau", "in_sigma", "strip", "disc", "combined"), rows, out)
    verdict = "PASS" if report.passed else "FAIL"
    out.write(f"summary: {verdict} checked={len(report.checks)} skipped={report.skipped} "
              f"a={fmt(report.a_theta)} b={fmt(report.b_theta)} s_max={fmt(s_spec.max())}\n")


def _add_problem(p: argparse.ArgumentParser, norms: bool = True) -> None:
    p.add_argument("--l", type=int, default=1)
    p.add_argument("--theta", default="l")
    if norms:
        p.add_argument("--profile")
        p.add_argument("--alpha-norm", type=float)
        p.add_argument("--alpha-prime-norm", type=float)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="alpha2dynamo", description="Spectra and spectral enclosures of the alpha^2-dynamo.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("bessel-zeros", help="eigenvalues lambda_k(theta) of the Bessel operator")
    _add_problem(p, norms=False)
    p.add_argument("--count", type=int, default=1)
    p.set_defaults(func=cmd_bessel_zeros)

    p = sub.add_parser("bounds", help="right bounds a, s, b and their comparison")
    _add_problem(p)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("enclosure", help="boundary polylines of both enclosures")
    _add_problem(p)
    p.add_argument("--xi-min", type=float, required=True)
    p.add_argument("--points", type=int, default=200)
    p.add_argument("--out")
    p.add_argument("--strip-out")
    p.set_defaults(func=cmd_enclosure)

    p = sub.add_parser("compare", help="k-curves and classification grid of the norm plane")
    _add_problem(p, norms=False)
    p.add_argument("--grid", default="60x60")
    p.add_argument("--out")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("check", help="stability and non-oscillation criteria")
    _add_problem(p)
    p.add_argument("--anti-dynamo", action="store_true")
    p.add_argument("--stable2", action="store_true")
    p.add_argument("--meet", action="store_true")
    p.add_argument("--local", type=float, metavar="LAM0")
    p.add_argument("--format", choices=("text", "records"), default="text")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("spectrum", help="leading eigenvalues of the discretized operator")
    _add_problem(p, norms=False)
    p.add_argument("--profile", required=True)
    p.add_argument("--grid", type=int, default=400, help="coarse grid N; values are reported on grid 2N")
    p.add_argument("--count", type=int, default=12)
    p.add_argument("--tol", type=float, default=dspec.DEFAULT_TOL)
    p.add_argument("--format", choices=("csv", "records"), default="csv")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("sweep", help="Stefani amplitude sweep with merge/crossing events")
    _add_problem(p, norms=False)
    p.add_argument("--profile", default="stefani")
    p.add_argument("--c-from", type=float, required=True)
    p.add_argument("--c-to", type=float, required=True)
    p.add_argument("--c-step", type=float, required=True)
    p.add_argument("--grid", type=int, default=800)
    p.add_argument("--count", type=int, default=6)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out")
    p.add_argument("--format", choices=("csv", "records"), default="csv")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="check computed eigenvalues against both enclosures")
    _add_problem(p, norms=False)
    p.add_argument("--profile", required=True)
    p.add_argument("--grid", type=int, default=400, help="coarse grid N; values are reported on grid 2N")
    p.add_argument("--count", type=int, default=12)
    p.add_argument("--tol", type=float, default=dspec.DEFAULT_TOL)
    p.set_defaults(func=cmd_verify)
    return parser


def run(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    try:
        args = build_parser().parse_args(argv)
        args.func(args, out)
    except DomainError as exc:
        err.write(f"error: {exc}\n")
        return 1
    except ConvergenceError as exc:
        err.write(f"numerical failure: {exc}\n")
        return 2
    return 0


def main() -> None:
    sys.exit(run())
