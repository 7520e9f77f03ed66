"""Command-line front end.

Subcommands: shoot, trace, terminate, tophat, contour, asym, stokes,
reproduce.  Exit codes: 0 success, 2 validation error, 3 numerical
failure.  Everything is deterministic (no random number generator is used
anywhere); --seedless merely asserts and records that fact in the
manifest.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from . import branches as B
from . import forcings as F
from . import shooting as S
from . import stokes as ST
from . import tophat as T
from .asymptotics import (glueing_profile, lorentzian_series_coefficients,
                          lorentzian_series_eval, small_alpha_model,
                          solve_glueing_plan)
from .errors import SolverError, ValidationError
from .manifest import ManifestWriter, write_csv
from .reproduce import TARGETS, reproduce, table1_rows


def _parse_range(text: str) -> np.ndarray:
    """lo:hi:count range syntax used by grid options."""
    parts = text.split(":")
    if len(parts) != 3:
        raise ValidationError(f"expected lo:hi:count, got {text!r}")
    lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
    if n < 1:
        raise ValidationError("count must be >= 1")
    return np.linspace(lo, hi, n)


def _emit(obj: dict, as_json: bool) -> None:
    if as_json:
        print(json.dumps(obj, indent=1, sort_keys=True, default=float))
    else:
        for key, val in obj.items():
            print(f"{key}: {val}")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="fkdv",
        description="Solution-space tools for u'' + u^2 = a f(x) with decay")
    ap.add_argument("--json", action="store_true", help="machine-readable stdout")
    ap.add_argument("--threads", type=int, default=None,
                    help="worker threads for grid sweeps")
    ap.add_argument("--seedless", action="store_true",
                    help="assert determinism (no RNG is used anywhere)")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("shoot", help="bisect u0 between escape classes")
    p.add_argument("--forcing", required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--u0-bracket", required=True,
                   help="comma-separated bracket, e.g. 8.54,8.55")
    p.add_argument("--emit", type=Path, default=None,
                   help="write the root trajectory CSV (x,u,du)")
    p.add_argument("--step-h", type=float, default=None)
    p.add_argument("--x-max", type=float, default=None)

    p = sub.add_parser("trace", help="continue a branch from a seed")
    p.add_argument("--forcing", required=True)
    p.add_argument("--seed-alpha", type=float, required=True)
    p.add_argument("--seed-u0", type=float, required=True)
    p.add_argument("--alpha-step", type=float, default=-0.1)
    p.add_argument("--alpha-ceiling", type=float, default=math.inf)
    p.add_argument("--max-points", type=int, default=300)
    p.add_argument("--out", type=Path, required=True, help="branch JSON path")

    p = sub.add_parser("terminate", help="refine a branch termination amplitude")
    p.add_argument("--forcing", required=True)
    p.add_argument("--branch-file", type=Path, required=True)
    p.add_argument("--rel-tol", type=float, default=1e-6)
    p.add_argument("--out", type=Path, default=None,
                   help="updated branch JSON (with termination record)")

    p = sub.add_parser("tophat", help="exact top-hat solutions")
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--branch", type=int, default=None)
    p.add_argument("--L", type=float, default=F.DEFAULT_TOPHAT_HALFWIDTH)
    p.add_argument("--critical-alphas", default=None,
                   help="range n1..n2 of critical amplitudes to print")
    p.add_argument("--emit", type=Path, default=None, help="profile CSV")

    p = sub.add_parser("contour", help="blow-up abscissa map over (alpha, u0)")
    p.add_argument("--forcing", required=True)
    p.add_argument("--alpha", required=True, help="lo:hi:count")
    p.add_argument("--u0", required=True, help="lo:hi:count")
    p.add_argument("--out", type=Path, required=True)

    p = sub.add_parser("asym", help="asymptotic evaluations")
    asub = p.add_subparsers(dest="asym_cmd", required=True)
    q = asub.add_parser("small-alpha")
    q.add_argument("--forcing", required=True)
    q.add_argument("--alpha", type=float, required=True)
    q = asub.add_parser("series")
    q.add_argument("--alpha", type=float, required=True)
    q.add_argument("--x", type=float, default=0.0)
    q.add_argument("--m", type=int, default=-1, choices=(-1, 1))
    q.add_argument("--truncation", default="optimal",
                   help="'optimal' or an explicit order")
    q = asub.add_parser("glue")
    q.add_argument("--forcing", required=True)
    q.add_argument("--alpha", type=float, required=True)
    q.add_argument("--homoclinics", type=int, required=True)
    q.add_argument("--emit", type=Path, default=None, help="profile CSV")
    q.add_argument("--table1", action="store_true",
                   help="also bisect the numeric amplitude and print the "
                        "comparison row")

    p = sub.add_parser("stokes", help="Stokes-line geometry and remainder")
    p.add_argument("--m", type=int, default=-1, choices=(-1, 1))
    p.add_argument("--out", type=Path, default=None,
                   help="lines CSV (line_id,re_z,im_z,re_sigma)")
    p.add_argument("--remainder", action="store_true")
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--x", default="0..20", help="x range lo..hi for --remainder")

    p = sub.add_parser("reproduce", help="figure/table reproduction driver")
    p.add_argument("target", choices=sorted(set(TARGETS)))
    p.add_argument("--outdir", type=Path, required=True)
    p.add_argument("--grid", type=int, default=96,
                   help="resolution knob for grid-heavy targets")
    return ap


def _cmd_shoot(args) -> dict:
    f = F.parse_forcing_token(args.forcing)
    cfg = S.default_config(f, args.alpha)
    if args.step_h or args.x_max:
        from dataclasses import replace
        if args.step_h:
            cfg = replace(cfg, step_h=args.step_h)
        if args.x_max:
            cfg = replace(cfg, x_max=args.x_max)
    lo, hi = (float(v) for v in args.u0_bracket.split(","))
    root = S.bisect_u0(f, args.alpha, (lo, hi), cfg)
    result = {"forcing": f.label, "alpha": args.alpha, "u0": root}
    if args.emit:
        mw = ManifestWriter("shoot", {"forcing": f.label, "alpha": args.alpha,
                                      "bracket": [lo, hi],
                                      "step_h": cfg.step_h, "x_max": cfg.x_max,
                                      "x_far": cfg.x_far,
                                      "blowup_threshold": cfg.blowup_threshold,
                                      "bisect_tol": cfg.bisect_tol})
        tr = S.integrate_ivp(f, args.alpha, root, cfg)
        write_csv(mw.add(args.emit), ["x", "u", "du"],
                  zip(tr.x.tolist(), tr.u.tolist(), tr.du.tolist()))
        mw.finish(args.emit.parent)
        result["trajectory"] = str(args.emit)
        result["outcome"] = tr.outcome.value
    return result


def _cmd_trace(args) -> dict:
    f = F.parse_forcing_token(args.forcing)
    cfg = S.default_config(f, args.seed_alpha)
    mw = ManifestWriter("trace", {"forcing": f.label,
                                  "seed": [args.seed_alpha, args.seed_u0],
                                  "alpha_step": args.alpha_step,
                                  "alpha_ceiling": args.alpha_ceiling,
                                  "max_points": args.max_points})
    root = S.find_root_near(f, args.seed_alpha, args.seed_u0,
                            max(1e-3, 2e-3 * abs(args.seed_u0)), cfg, n_scan=41)
    seed = B.make_branch_point(f, args.seed_alpha, root, cfg)
    br = B.trace_branch(f, seed, args.alpha_step,
                        alpha_ceiling=args.alpha_ceiling,
                        max_points=args.max_points)
    args.out.write_text(br.to_json(), encoding="utf-8")
    mw.add(args.out)
    mw.finish(args.out.parent)
    return {"points": len(br.points), "folds": br.folds,
            "alpha_end": br.points[-1].alpha, "out": str(args.out)}


def _cmd_terminate(args) -> dict:
    f = F.parse_forcing_token(args.forcing)
    br = B.Branch.from_json(args.branch_file.read_text(encoding="utf-8"))
    alpha_star, profile = B.locate_termination(f, br, rel_tol=args.rel_tol)
    xs, us, _ = profile.trusted()
    kappa = B.kappa_bvp(f, alpha_star, xs, us, +1)
    br.termination = B.TerminationRecord(alpha_star=alpha_star, kappa=kappa,
                                         fold=bool(br.folds))
    out = args.out or args.branch_file
    out.write_text(br.to_json(), encoding="utf-8")
    return {"alpha_star": alpha_star, "kappa": kappa,
            "fold": bool(br.folds), "out": str(out)}


def _cmd_tophat(args) -> dict:
    if args.critical_alphas:
        lo, _, hi = args.critical_alphas.partition("..")
        n_lo, n_hi = int(lo), int(hi or lo)
        vals = {n: T.critical_alpha(n, args.L) for n in range(n_lo, n_hi + 1)}
        return {"L": args.L, "critical_alphas": vals}
    if args.alpha is None or args.branch is None:
        raise ValidationError("tophat needs --alpha and --branch "
                              "(or --critical-alphas)")
    sol = T.solve_exact(args.alpha, args.branch, args.L)
    result = {"alpha": args.alpha, "branch": args.branch, "L": args.L,
              "u0": sol.u0, "orbit_energy": sol.energy_c}
    if args.emit:
        mw = ManifestWriter("tophat", {"alpha": args.alpha, "branch": args.branch,
                                       "L": args.L})
        xs = np.linspace(-3.0 * args.L, 3.0 * args.L, 1201)
        us = T.evaluate_solution(sol, xs)
        write_csv(mw.add(args.emit), ["x", "u"], zip(xs.tolist(), us.tolist()))
        mw.finish(args.emit.parent)
        result["profile"] = str(args.emit)
    return result


def _cmd_contour(args) -> dict:
    f = F.parse_forcing_token(args.forcing)
    alphas = _parse_range(args.alpha)
    u0s = _parse_range(args.u0)
    mw = ManifestWriter("contour", {"forcing": f.label, "alpha": args.alpha,
                                    "u0": args.u0})
    z = S.blowup_contour_map(f, alphas, u0s)
    rows = []
    for i, a in enumerate(alphas):
        for j, u in enumerate(u0s):
            rows.append((float(a), float(u), float(z[i, j])))
    write_csv(mw.add(args.out), ["alpha", "u0", "x0"], rows)
    mw.finish(args.out.parent)
    finite = np.isfinite(z)
    return {"cells": int(z.size), "blowup_cells": int(np.count_nonzero(finite)),
            "out": str(args.out)}


def _cmd_asym(args) -> dict:
    if args.asym_cmd == "small-alpha":
        f = F.parse_forcing_token(args.forcing)
        model = small_alpha_model(f)
        return {"forcing": f.label, "alpha": args.alpha,
                "u0": model.u0(args.alpha), "M": model.M, "X0": model.X0}
    if args.asym_cmd == "series":
        series = lorentzian_series_coefficients(40, args.m)
        trunc = args.truncation if args.truncation == "optimal" \
            else int(args.truncation)
        val, err = lorentzian_series_eval(series, args.alpha, args.x, trunc)
        return {"alpha": args.alpha, "x": args.x, "m": args.m,
                "u": val, "est_error": err, "truncation": str(trunc)}
    f = F.parse_forcing_token(args.forcing)
    plan = solve_glueing_plan(f, args.alpha, args.homoclinics)
    result = {"forcing": f.label, "alpha": args.alpha,
              "homoclinics": args.homoclinics,
              "u0_prediction": plan.u0_prediction,
              "Y": list(plan.Y_seq), "Lambda": list(plan.Lambda_seq),
              "peaks_x": list(plan.peak_locations)}
    if plan.u10 is not None:
        result["U10"] = plan.u10
    if args.emit:
        mw = ManifestWriter("asym-glue", {"forcing": f.label, "alpha": args.alpha,
                                          "homoclinics": args.homoclinics})
        span = (plan.Y_seq[-1] if plan.Y_seq else 4.0) + 6.0
        xs = np.linspace(-span * plan.delta, span * plan.delta, 1601)
        us = glueing_profile(f, args.alpha, plan, xs)
        write_csv(mw.add(args.emit), ["x", "u_glueing"],
                  zip(xs.tolist(), us.tolist()))
        mw.finish(args.emit.parent)
        result["profile"] = str(args.emit)
    if args.table1:
        d = plan.delta
        cfg = S.IvpConfig(step_h=min(1e-3, 0.02 * d),
                          x_max=200.0 if f.kind is F.Kind.LORENTZIAN else 40.0,
                          x_far=S.cluster_x_far(f, args.alpha, plan.Y_seq[-1]
                                                if plan.Y_seq else 3.0))
        u0 = S.find_root_near(f, args.alpha, plan.u0_seed, 13.0, cfg, n_scan=301)
        result["u0_numeric"] = u0
        result["delta_u"] = abs((u0 - plan.u0_prediction) / u0)
    return result


def _cmd_stokes(args) -> dict:
    if args.remainder:
        if args.alpha is None:
            raise ValidationError("--remainder requires --alpha")
        lo, _, hi = args.x.partition("..")
        xs = np.linspace(float(lo), float(hi or lo), 201)
        rows = [(float(x), ST.remainder_estimate(args.alpha, float(x)),
                 ST.remainder_envelope(args.alpha, float(x))) for x in xs]
        result = {"alpha": args.alpha,
                  "envelope_at_0": ST.remainder_envelope(args.alpha, 0.0)}
        if args.out:
            mw = ManifestWriter("stokes-remainder", {"alpha": args.alpha,
                                                     "x": args.x})
            write_csv(mw.add(args.out), ["x", "remainder", "envelope"], rows)
            mw.finish(args.out.parent)
            result["out"] = str(args.out)
        return result
    lines = ST.trace_stokes_lines(args.m,
                                  arclength_max=140.0 if args.m == -1 else 40.0)
    result = {"m": args.m, "lines": len(lines),
              "exit_angles": [ln.exit_angle for ln in lines],
              "stokes_multiplier": ST.stokes_multiplier(),
              "rho": ST.far_field_rho()}
    if args.out:
        mw = ManifestWriter("stokes", {"m": args.m})
        rows = []
        for k, ln in enumerate(lines):
            for z, s in zip(ln.points, ln.sigma):
                rows.append((k, float(z.real), float(z.imag), float(s.real)))
        write_csv(mw.add(args.out), ["line_id", "re_z", "im_z", "re_sigma"], rows)
        mw.finish(args.out.parent)
        result["out"] = str(args.out)
    return result


def _cmd_reproduce(args) -> dict:
    manifest = reproduce(args.target, args.outdir, grid=args.grid)
    return {"target": args.target, "outputs": manifest.outputs,
            "wall_time_s": manifest.wall_time_s}


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.threads is not None:
        import numba
        numba.set_num_threads(max(1, args.threads))
    handler = {
        "shoot": _cmd_shoot, "trace": _cmd_trace, "terminate": _cmd_terminate,
        "tophat": _cmd_tophat, "contour": _cmd_contour, "asym": _cmd_asym,
        "stokes": _cmd_stokes, "reproduce": _cmd_reproduce,
    }[args.cmd]
    try:
        result = handler(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SolverError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    if args.seedless:
        result["seedless"] = True
    _emit(result, args.json)
    return 0


if __name__ == "__main__":
    sys.exit(main())
