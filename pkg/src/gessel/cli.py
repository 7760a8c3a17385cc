"""Command-line entry point: ``gessel <subcommand> ...``.

Exit status is 0 when every requested check passes, 1 when one fails and 2
on a usage error (including parameters outside a function's domain).
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

import numpy as np

from . import acceptance, hypergeometric as hg, kernel_curve as kc, uniformization as un
from . import walk_counting as wc, zeta_gf as zg
from .reports import CriterionResult, exact, numeric, timed, to_json


__all__ = ["main", "build_parser", "UsageError"]


class UsageError(Exception):
    pass


def _emit(args, reports, payload=None):
    """Print reports as JSON or as one line each; return the exit code."""
    reports = reports if isinstance(reports, list) else [reports]
    if args.json:
        obj = payload if payload is not None else [r.to_dict() for r in reports]
        print(json.dumps(obj, indent=2, default=str))
    else:
        for r in reports:
            print(r.summary() if isinstance(r, CriterionResult) else r.line())
    return 0 if all(r.passed for r in reports) else 1


def _seed(args):
    return args.seed if args.seed is not None else acceptance.default_seed()


def _tol(args, default):
    return default if args.tol is None else args.tol


# -- subcommands -----------------------------------------------------------------


def cmd_count(args):
    table = wc.count_table(wc.GESSEL, args.n_max)
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            table.write_csv(fh)
    rows = [
        {"n": 2 * n, "excursions": table.excursions(2 * n), "closed_form": wc.gessel_excursions_closed_form(n)}
        for n in range(args.n_max // 2 + 1)
    ]
    ok = all(r["excursions"] == r["closed_form"] for r in rows)
    if args.json:
        print(json.dumps({"n_max": args.n_max, "rows": rows, "pass": ok}, default=str))
    else:
        if not args.csv:
            print(f"{'n':>4}  {'q(0,0;n)':>30}")
            for r in rows:
                print(f"{r['n']:>4}  {r['excursions']:>30}")
        else:
            print(f"wrote {args.csv}")
    return 0 if ok else 1


def cmd_periods(args):
    ctx = un.make_context(args.z)
    p = ctx.periods
    inv = un.closed_form_invariants(args.z)
    T = un.compute_T(args.z)
    out = {
        "z": args.z,
        "omega1_over_i": p.omega1.imag,
        "omega2": p.omega2,
        "omega3": p.omega3,
        "ratio": p.ratio,
        "g2": inv.g2,
        "g3": inv.g3,
        "R": un.compute_R(args.z),
        "T": list(T),
    }
    ok = abs(p.ratio - 0.75) <= _tol(args, 1e-9)
    if args.json:
        print(json.dumps(out))
    else:
        for k, v in out.items():
            if k == "T":
                for i, t in enumerate(v, 1):
                    print(f"T{i:<13} {t:.15g}")
            else:
                print(f"{k:<14} {v:.15g}")
    return 0 if ok else 1


def cmd_orbit(args):
    try:
        x, y = Fraction(args.x), Fraction(args.y)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(str(exc)) from exc
    if x == 0 or y == 0:
        raise UsageError("the orbit needs nonzero x and y")
    pts = kc.orbit(x, y)
    total = sum((g.sign * p[0] * p[1] for g, p in pts), Fraction(0))
    out = {
        "x": str(x),
        "y": str(y),
        "orbit": [{"word": str(g), "sign": g.sign, "x": str(p[0]), "y": str(p[1])} for g, p in pts],
        "orbit_sum": str(total),
    }
    print(json.dumps(out, indent=2, ensure_ascii=False))
    return 0 if total == 0 else 1


def cmd_verify_conjecture(args):
    with timed() as t:
        table = wc.count_table(wc.GESSEL, 2 * args.n_max)
        rows = [(n, table.excursions(2 * n), wc.gessel_excursions_closed_form(n)) for n in range(args.n_max + 1)]
        series = hg.check_f0_identity(args.n_max, table)
    ok = all(a == b for _, a, b in rows)
    reports = [
        exact("excursions_vs_closed_form", ok, t.ms, details={"rows": [list(r) for r in rows]}, n_max=args.n_max),
        exact("f0_series_identity", series.vanishing_above, details={"first_mismatch": series.first_mismatch}, order=args.n_max),
    ]
    if not args.json:
        for n, a, b in rows:
            print(f"{2 * n:>4}  {a:>32}  {'==' if a == b else '!='}  {b}")
    return _emit(args, reports)


def cmd_verify_q00(args):
    z = args.z
    with timed() as t:
        q = zg.q00_zeta(z)
    n = 10
    while wc.Q_tail_bound(0, 0, z, n) >= 1e-10:
        n += 1
        if n > 2000:
            raise UsageError("z too close to 1/4 for the series oracle")
    s = wc.eval_Q_truncated(0, 0, z, n).real
    reports = [numeric("q00_zeta_vs_series", abs(q - s), _tol(args, 1e-6), t.ms, z=z, n_max=n)]
    if 16 * z * z < hg.MAX_ARG:
        h = (hg.G_series(z) - 1) / (2 * z * z)
        reports.append(numeric("q00_zeta_vs_2F1", abs(q - h), _tol(args, 1e-7), z=z))
    return _emit(args, reports, _single_payload("theorem31", z, reports))


def cmd_verify_ry(args):
    z = args.z
    rctx = zg.make_ry_context(z)
    with timed() as t:
        w = zg.delta_y_samples(rctx.ctx, 20, _seed(args))
        ser = zg.series_in_delta_y(rctx, w)
    cont = zg.check_continuation_identities(rctx, 50, _seed(args))
    reports = [
        numeric("ry_zeta_vs_series", ser["residual"], _tol(args, 1e-6), t.ms, z=z),
        numeric("continuation_identities", max(cont[k] for k in ("i", "ii", "iii", "iv")), _tol(args, 1e-7), z=z),
        numeric("q00_from_ry", abs(zg.q00_from_ry(rctx) - rctx.q00), _tol(args, 1e-8), z=z),
    ]
    return _emit(args, reports, _single_payload("theorem32", z, reports))


def cmd_verify_residues(args):
    z = args.z
    rctx = zg.make_ry_context(z)
    with timed() as t:
        tab = zg.verify_pole_residues(rctx)
    reports = [
        numeric("pole_residues", tab["max_rel_error"], _tol(args, 1e-6), t.ms, z=z),
        exact("no_other_poles", tab["scan_ok"], z=z),
    ]
    if not args.json:
        for row in tab["rows"]:
            print(f"{row['point']:>10}  expected {row['expected']:+.10f}  measured {row['residue']:+.10f}")
    return _emit(args, reports, _single_payload("table1", z, reports))


def _single_payload(check, z, reports):
    # headline numbers come from the report closest to (or furthest past) its tolerance
    numeric_reports = [r for r in reports if not isinstance(r.residual, str)]
    worst = max(numeric_reports, key=lambda r: r.residual / r.tolerance if r.tolerance > 0 else np.inf)
    return {
        "check": check,
        "z": z,
        "residual": worst.residual,
        "tolerance": worst.tolerance,
        "pass": all(r.passed for r in reports),
        "reports": [r.to_dict() for r in reports],
    }


def cmd_verify_key_identities(args):
    if args.grid < 1:
        raise UsageError("--grid must be >= 1")
    grid = np.linspace(0.02, 0.48, args.grid)
    with timed() as t:
        rep = hg.check_key_identities(grid, _tol(args, 1e-8))
    reports = [numeric(f"key_{k}", v, _tol(args, 1e-8), t.ms, points=args.grid) for k, v in rep.residuals.items()]
    return _emit(args, reports)


def cmd_conjectures_new(args):
    if args.j < 0 or args.order < 0:
        raise UsageError("--j and --order must be nonnegative")
    rep = hg.check_new_conjectures(args.j, args.order)
    deg = 3 * args.j + 2
    out = {
        "j": args.j,
        "order": args.order,
        "degree_expected": deg,
        "coefficients": [str(c) for c in rep.coefficients],
        "vanishing_above_degree": rep.vanishing_above,
        "positive_up_to_degree": rep.positive_below,
        "first_nonzero_above_degree": rep.first_mismatch,
        "status": "conjecture-consistent" if rep.consistent else "finding",
    }
    if args.json:
        print(json.dumps(out, indent=2))
    else:
        print(f"p_{args.j}(z) through z^{args.order}:")
        for k, c in enumerate(rep.coefficients):
            print(f"  z^{k:<3} {c}")
        print(out["status"])
    # open conjectures are reported, not enforced
    return 0


def cmd_report_all(args):
    results = acceptance.run_all(quick=args.quick, seed=_seed(args), tol=args.tol)
    if args.json:
        print(to_json([r.to_dict() for r in results], indent=2))
    else:
        for r in results:
            print(r.summary())
            if args.verbose:
                for rep in r.reports:
                    print("    " + rep.line())
    return 0 if all(r.passed for r in results) else 1


# -- argument parsing ----------------------------------------------------------------


def _z(text):
    try:
        z = float(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from exc
    if not 0 < z < 0.25:
        raise argparse.ArgumentTypeError("z must lie in (0, 1/4)")
    return z


def _nonneg_int(text):
    n = int(text)
    if n < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return n


def build_parser() -> argparse.ArgumentParser:
    def shared(defaults):
        # subcommand copies suppress their defaults so options given before the subcommand survive
        kw = {} if defaults else {"default": argparse.SUPPRESS}
        g = argparse.ArgumentParser(add_help=False)
        g.add_argument("--json", action="store_true", help="machine-readable output", **kw)
        g.add_argument("--tol", type=float, help="override the numeric tolerances", **kw)
        g.add_argument("--seed", type=int, help="sampler seed (default $GESSEL_SEED or 0)", **kw)
        return g

    common = shared(False)
    p = argparse.ArgumentParser(prog="gessel", description="Verification workbench for Gessel walks.", parents=[shared(True)])
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("count", parents=[common], help="exact walk counts")
    c.add_argument("--n-max", type=_nonneg_int, default=20)
    c.add_argument("--csv", help="write the table as CSV (i,j,n,count)")
    c.set_defaults(func=cmd_count)

    c = sub.add_parser("periods", parents=[common], help="periods, invariants, R and T values")
    c.add_argument("--z", type=_z, required=True)
    c.set_defaults(func=cmd_periods)

    c = sub.add_parser("orbit", parents=[common], help="signed orbit of a rational point")
    c.add_argument("--x", required=True)
    c.add_argument("--y", required=True)
    c.set_defaults(func=cmd_orbit)

    v = sub.add_parser("verify", parents=[common], help="individual verifications")
    vs = v.add_subparsers(dest="what", required=True)
    c = vs.add_parser("conjecture", parents=[common])
    c.add_argument("--n-max", type=_nonneg_int, default=25)
    c.set_defaults(func=cmd_verify_conjecture)
    for name, fn in (("theorem31", cmd_verify_q00), ("theorem32", cmd_verify_ry), ("table1", cmd_verify_residues)):
        c = vs.add_parser(name, parents=[common])
        c.add_argument("--z", type=_z, default=0.1)
        c.set_defaults(func=fn)
    c = vs.add_parser("key-identities", parents=[common])
    c.add_argument("--grid", type=int, default=20)
    c.set_defaults(func=cmd_verify_key_identities)

    c = sub.add_parser("conjectures", parents=[common], help="report on open conjectures")
    cs = c.add_subparsers(dest="which", required=True)
    n = cs.add_parser("new", parents=[common])
    n.add_argument("--j", type=int, required=True)
    n.add_argument("--order", type=int, required=True)
    n.set_defaults(func=cmd_conjectures_new)

    c = sub.add_parser("report-all", parents=[common], help="run the acceptance suite")
    c.add_argument("--quick", action="store_true", help="smaller grids and samples")
    c.add_argument("-v", "--verbose", action="store_true")
    c.set_defaults(func=cmd_report_all)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else 2
    try:
        return args.func(args)
    except (UsageError, ValueError) as exc:
        print(f"gessel: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())


