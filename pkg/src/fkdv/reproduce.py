"""Desk-scale reproduction drivers for the catalogue figures and table.

Each target emits figure-ready CSV (the authoritative output) plus a
minimal SVG rendering, and returns a RunManifest.  Heavy targets accept a
resolution knob and degrade gracefully at desk scale.
"""

from __future__ import annotations

import json
import math
from importlib import resources
from pathlib import Path

import numpy as np

from . import branches as B
from . import forcings as F
from . import shooting as S
from . import stokes as ST
from . import tophat as T
from .asymptotics import (glueing_profile, lorentzian_series_coefficients,
                          lorentzian_series_eval, small_alpha_model,
                          small_alpha_u0, solve_glueing_plan)
from .errors import ValidationError
from .manifest import ManifestWriter, write_csv
from .svgplot import plot_lines

TARGETS = ("fig1", "fig2", "fig3", "fig4", "fig5_branches", "fig5_profiles",
           "clinic_comp", "fig6", "fig7", "figB1", "table1")


def reference_values() -> dict:
    with resources.files("fkdv").joinpath("reference_values.json").open() as fh:
        return json.load(fh)


def reproduce(target: str, outdir: Path, grid: int = 96, threads: int | None = None):
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    if target == "clinic_comp":
        target = "fig5_profiles"
    fn = {
        "fig1": _fig1, "fig2": _fig2, "fig3": _fig3, "fig4": _fig4,
        "fig5_branches": _fig5_branches, "fig5_profiles": _fig5_profiles,
        "fig6": _fig6, "fig7": _fig7, "figB1": _figB1, "table1": _table1,
    }.get(target)
    if fn is None:
        raise ValidationError(f"unknown target {target!r}; choose from {TARGETS}")
    return fn(outdir, grid)


def _fig1(outdir: Path, grid: int):
    mw = ManifestWriter("fig1", {"L": 0.5, "n_branches": 3, "alpha_points": grid})
    curves = []
    rows = []
    for n in (0, 1, 2):
        a_min = T.critical_alpha(max(n, 1)) * 1.02 if n >= 1 else 30.0
        alphas = np.geomspace(a_min, 25000.0, grid)
        u0s = []
        for a in alphas:
            try:
                u0s.append(T.solve_exact(float(a), n).u0)
            except Exception:
                u0s.append(float("nan"))
        curves.append((list(alphas), u0s, f"B{n}"))
        rows += [(f"B{n}", float(a), u) for a, u in zip(alphas, u0s)]
    write_csv(mw.add(outdir / "fig1_branches.csv"), ["branch", "alpha", "u0"], rows)
    prof_rows = []
    xs = np.linspace(-1.5, 1.5, 601)
    for a, n in ((20618.0, 0), (6205.0, 1), (13584.0, 2)):
        sol = T.solve_exact(a, n)
        us = T.evaluate_solution(sol, xs)
        prof_rows += [(f"B{n}", float(x), float(u)) for x, u in zip(xs, us)]
    write_csv(mw.add(outdir / "fig1_profiles.csv"), ["branch", "x", "u"], prof_rows)
    plot_lines(mw.add(outdir / "fig1.svg"), curves,
               title="exact top-hat branches (L = 1/2)", xlabel="alpha", ylabel="u0")
    return mw.finish(outdir)


def _shooting_pair(outdir: Path, f, alpha, u0a, u0b, stem):
    mw = ManifestWriter(stem, {"forcing": f.label, "alpha": alpha,
                               "u0": [u0a, u0b]})
    cfg = S.default_config(f, alpha)
    curves = []
    for tag, u0 in (("a", u0a), ("b", u0b)):
        tr = S.integrate_ivp(f, alpha, u0, cfg)
        write_csv(mw.add(outdir / f"{stem}_{tag}.csv"), ["x", "u", "du"],
                  zip(tr.x.tolist(), tr.u.tolist(), tr.du.tolist()))
        xs, us, dus = tr.trusted()
        curves.append((us.tolist(), dus.tolist(), f"u0={u0}"))
    plot_lines(mw.add(outdir / f"{stem}.svg"), curves,
               title=f"{f.label} alpha={alpha}: phase plane", xlabel="u", ylabel="du/dx")
    return mw.finish(outdir)


def _fig2(outdir: Path, grid: int):
    return _shooting_pair(outdir, F.gaussian(), 36.0, 8.5457, 8.5452, "fig2")


def _fig3(outdir: Path, grid: int):
    return _shooting_pair(outdir, F.lorentzian(), 26.44, 8.298755, 8.298750, "fig3")


def _fig4(outdir: Path, grid: int):
    mw = ManifestWriter("fig4", {"alphas": "1e-4..1e-2", "points": grid // 2})
    g = F.gaussian()
    alphas = np.geomspace(1e-4, 2e-2, grid // 2)
    rows = []
    for a in alphas:
        a = float(a)
        asym = small_alpha_u0(g, a)
        root = S.bisect_u0(g, a, (3.0 * asym, 0.2 * asym), S.default_config(g, a))
        rows.append((a, root, asym))
    write_csv(mw.add(outdir / "fig4_branch.csv"),
              ["alpha", "u0_numeric", "u0_asymptotic"], rows)
    model = small_alpha_model(g)
    a0 = 1.928e-4
    cfg = S.default_config(g, a0)
    root = S.bisect_u0(g, a0, (3.0 * model.u0(a0), 0.2 * model.u0(a0)), cfg)
    tr = S.integrate_ivp(g, a0, root, cfg)
    xs, us, _ = tr.trusted()
    Xs = a0 ** (1.0 / 3.0) * xs
    Vn = us / a0 ** (2.0 / 3.0)
    Va = -6.0 / (model.X0 + np.abs(Xs)) ** 2
    write_csv(mw.add(outdir / "fig4_outer_profile.csv"),
              ["X", "V_numeric", "V_asymptotic"],
              zip(Xs.tolist(), Vn.tolist(), Va.tolist()))
    plot_lines(mw.add(outdir / "fig4.svg"),
               [(list(alphas), [r[1] for r in rows], "numeric"),
                (list(alphas), [r[2] for r in rows], "asymptotic")],
               title="B0 near alpha = 0 (Gaussian)", xlabel="alpha", ylabel="u(0)")
    return mw.finish(outdir)


def _fig5_branches(outdir: Path, grid: int):
    mw = ManifestWriter("fig5_branches", {"seed": [26.44, 8.2987198],
                                          "alpha_ceiling": 40.0})
    lor = F.lorentzian()
    cfg = S.default_config(lor, 26.44)
    r = S.bisect_u0(lor, 26.44, (8.2980, 8.2989), cfg)
    seed = B.make_branch_point(lor, 26.44, r, cfg)
    br = B.trace_branch(lor, seed, alpha_step=-0.1, alpha_ceiling=40.0,
                        max_points=6 * grid)
    write_csv(mw.add(outdir / "fig5_branch_B1B2.csv"),
              ["alpha", "u0", "maxima"],
              [(p.alpha, p.u0, p.maxima_count) for p in br.points])
    (outdir / "fig5_branch_B1B2.json").write_text(br.to_json(), encoding="utf-8")
    mw.add(outdir / "fig5_branch_B1B2.json")
    alphas = np.linspace(6.0, 40.0, grid)
    b0 = []
    for a in alphas:
        a = float(a)
        guess = -math.sqrt(a) + 0.5
        root = S.find_root_near(lor, a, guess, 2.5, S.default_config(lor, a),
                                n_scan=101)
        b0.append((a, root, guess))
    write_csv(mw.add(outdir / "fig5_branch_B0.csv"),
              ["alpha", "u0", "series_leading"], b0)
    plot_lines(mw.add(outdir / "fig5_branches.svg"),
               [([p.alpha for p in br.points], [p.u0 for p in br.points], "B1-B2"),
                ([r[0] for r in b0], [r[1] for r in b0], "B0"),
                ([r[0] for r in b0], [r[2] for r in b0], "-sqrt(a)+1/2")],
               title="Lorentzian branches", xlabel="alpha", ylabel="u0")
    return mw.finish(outdir)


def _fig5_profiles(outdir: Path, grid: int):
    mw = ManifestWriter("fig5_profiles", {"alpha": 1e8, "counts": [2, 3]})
    g = F.gaussian()
    a = 1e8
    curves = []
    for n_h, stem in ((3, "triple"), (2, "double")):
        plan = solve_glueing_plan(g, a, n_h)
        d = plan.delta
        cfg = S.IvpConfig(step_h=2e-4, x_max=40.0,
                          x_far=S.cluster_x_far(g, a, plan.Y_seq[-1]))
        root = S.find_root_near(g, a, plan.u0_seed, 13.0, cfg, n_scan=301)
        tr = S.integrate_ivp(f=g, alpha=a, u0=root, cfg=cfg)
        xs, us, _ = tr.trusted()
        m = xs <= (plan.Y_seq[-1] + 6.0) * d
        ua = glueing_profile(g, a, plan, xs[m])
        write_csv(mw.add(outdir / f"fig5_{stem}.csv"),
                  ["x", "u_numeric", "u_glueing"],
                  zip(xs[m].tolist(), us[m].tolist(), ua.tolist()))
        curves.append((xs[m].tolist(), us[m].tolist(), f"{stem} numeric"))
        curves.append((xs[m].tolist(), ua.tolist(), f"{stem} glued"))
    plot_lines(mw.add(outdir / "fig5_profiles.svg"), curves,
               title="glued vs numeric profiles at a = 1e8",
               xlabel="x", ylabel="u")
    return mw.finish(outdir)


def _fig6(outdir: Path, grid: int):
    mw = ManifestWriter("fig6", {"a_values": [0.0, 0.7, 1.0], "grid": grid})
    curves = []
    for aa in (0.0, 0.7, 1.0):
        f = F.hybrid(aa)
        alphas = np.linspace(5.0, 60.0, grid)
        u0s = np.linspace(0.02, 10.0, grid)
        z = S.blowup_contour_map(f, alphas, u0s)
        rows = []
        for i, av in enumerate(alphas):
            for j, uv in enumerate(u0s):
                rows.append((float(av), float(uv), float(z[i, j])))
        write_csv(mw.add(outdir / f"fig6_a{aa:g}.csv"), ["alpha", "u0", "x0"], rows)
        # export one mid-height slice to the SVG for a quick look
        jmid = len(u0s) // 2
        col = np.where(np.isfinite(z[:, jmid]), z[:, jmid], np.nan)
        curves.append((list(alphas), col.tolist(), f"a={aa:g}, u0={u0s[jmid]:.2f}"))
    plot_lines(mw.add(outdir / "fig6.svg"), curves,
               title="blow-up abscissa x0 (slices)", xlabel="alpha", ylabel="x0")
    return mw.finish(outdir)


def _fig7(outdir: Path, grid: int):
    mw = ManifestWriter("fig7", {"seed_alpha": 30.0})
    m = F.marginal_quartic()
    cfg = S.default_config(m, 30.0)
    r = S.find_root_near(m, 30.0, 9.2, 1.2, cfg, n_scan=401)
    seed = B.make_branch_point(m, 30.0, r, cfg)
    br = B.trace_branch(m, seed, alpha_step=-0.1, alpha_ceiling=31.0,
                        max_points=4 * grid)
    write_csv(mw.add(outdir / "fig7_branch.csv"),
              ["alpha", "u0", "maxima"],
              [(p.alpha, p.u0, p.maxima_count) for p in br.points])
    plot_lines(mw.add(outdir / "fig7.svg"),
               [([p.alpha for p in br.points], [p.u0 for p in br.points], "B1")],
               title="marginal forcing branch B1", xlabel="alpha", ylabel="u0")
    return mw.finish(outdir)


def _figB1(outdir: Path, grid: int):
    mw = ManifestWriter("figB1", {"arclength": 140.0})
    rows = []
    curves = []
    rho = ST.far_field_rho()
    for m in (-1, +1):
        lines = ST.trace_stokes_lines(m, arclength_max=140.0 if m == -1 else 40.0)
        for k, ln in enumerate(lines):
            for z, s in zip(ln.points, ln.sigma):
                rows.append((f"m{m}_{k}", float(z.real), float(z.imag),
                             float(s.real)))
            curves.append(([float(z.real) for z in ln.points],
                           [float(z.imag) for z in ln.points], f"m={m} line {k}"))
    xs = np.linspace(1.0, 120.0, 240)
    curves.append((list(xs), list(rho * np.sqrt(xs)), "rho sqrt(x)"))
    write_csv(mw.add(outdir / "figB1_lines.csv"),
              ["line_id", "re_z", "im_z", "re_sigma"], rows)
    plot_lines(mw.add(outdir / "figB1.svg"), curves,
               title="Stokes lines and far-field parabola",
               xlabel="Re z", ylabel="Im z")
    return mw.finish(outdir)


def table1_rows():
    """Numeric and asymptotic comparison rows for the homoclinic tables."""
    ref = reference_values()["table1"]
    out = []
    for rec in ref:
        forcing = F.gaussian() if rec["case"].startswith("gauss") else F.lorentzian()
        n_h = 3 if rec["case"].endswith("triple") else 2
        a = float(rec["alpha"])
        plan = solve_glueing_plan(forcing, a, n_h)
        d = plan.delta
        cfg = S.IvpConfig(step_h=min(1e-3, 0.02 * d), x_max=40.0 if n_h else 40.0,
                          x_far=S.cluster_x_far(forcing, a, plan.Y_seq[-1]))
        if forcing.kind is F.Kind.LORENTZIAN:
            cfg = S.IvpConfig(step_h=cfg.step_h, x_max=200.0, x_far=cfg.x_far)
        u0 = S.find_root_near(forcing, a, plan.u0_seed, 13.0, cfg, n_scan=301)
        tr = S.integrate_ivp(forcing, a, u0, cfg)
        xs, us, _ = tr.trusted()
        # numeric first-peak position (stretched variable)
        i_pk = 1 + int(np.argmax(us[1:int(3 * plan.Y_seq[-1] / d / cfg.step_h)]))
        if n_h == 3:
            # first OFF-centre peak: skip the central pulse
            mask = xs > 0.5 * plan.Y_seq[0] * d
            seg = np.flatnonzero(mask)
            i_pk = seg[np.argmax(us[seg])]
        y_h = xs[i_pk] / d
        du = abs((u0 - plan.u0_prediction) / u0)
        dy = abs((y_h - plan.Y_seq[0]) / y_h)
        out.append({
            "case": rec["case"], "alpha": a,
            "u0_numeric": u0, "u0_asymptotic": plan.u0_prediction,
            "delta_u": du, "Y_H": y_h, "Y1": plan.Y_seq[0], "delta_Y": dy,
            "ref_u0": rec["u0"], "ref_u0_asym": rec["u0_asym"], "ref_Y1": rec["Y1"],
        })
    return out


def _table1(outdir: Path, grid: int):
    mw = ManifestWriter("table1", {"rows": 10})
    rows = table1_rows()
    write_csv(mw.add(outdir / "table1.csv"),
              ["case", "alpha", "u0_numeric", "u0_asymptotic", "delta_u",
               "Y_H", "Y1", "delta_Y"],
              [(r["case"], r["alpha"], r["u0_numeric"], r["u0_asymptotic"],
                r["delta_u"], r["Y_H"], r["Y1"], r["delta_Y"]) for r in rows])
    write_csv(mw.add(outdir / "table1_diff.csv"),
              ["case", "alpha", "u0_numeric", "ref_u0", "u0_asymptotic",
               "ref_u0_asym", "Y1", "ref_Y1"],
              [(r["case"], r["alpha"], r["u0_numeric"], r["ref_u0"],
                r["u0_asymptotic"], r["ref_u0_asym"], r["Y1"], r["ref_Y1"])
               for r in rows])
    return mw.finish(outdir)
