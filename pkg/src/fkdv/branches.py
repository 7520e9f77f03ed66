"""Branch continuation, termination points and the fold constant kappa.

A branch B_n is the one-parameter family of solutions whose profiles have
n interior maxima.  Tracing uses secant prediction in the scaled
(alpha, u0) plane with bisection correction along the transverse
direction, which rounds folds without special cases; a fold is recorded
wherever d(alpha) changes sign along the arc.  For forcings decaying
faster than 1/x^4 (and the top hat) a branch terminates at a positive
amplitude where the bisection root ceases to exist; the termination point
is refined by bisection on root existence, and the linearised problem
there yields the constant kappa whose sign decides on which side of the
termination point the branch lives (kappa > 0 forces a fold).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.linalg import solve_banded

from .errors import BracketError, SolverError, ValidationError
from .forcings import DecayClass, ForcingProfile, decay_class, evaluate
from .shooting import (IvpConfig, Outcome, Trajectory, bisect_u0, classify_u0,
                       decision_depth, default_config, find_root_near,
                       integrate_ivp, scan_brackets)


@dataclass(frozen=True)
class BranchPoint:
    alpha: float
    u0: float
    maxima_count: int
    horizon_residual: float


@dataclass(frozen=True)
class TerminationRecord:
    alpha_star: float
    kappa: float | None
    fold: bool


@dataclass
class Branch:
    label_n: int
    points: list[BranchPoint] = field(default_factory=list)
    termination: TerminationRecord | None = None
    folds: list[int] = field(default_factory=list)  # indices where d(alpha) flips

    def to_json(self) -> str:
        doc = {
            "label_n": self.label_n,
            "points": [{"alpha": p.alpha, "u0": p.u0, "maxima": p.maxima_count,
                        "residual": p.horizon_residual} for p in self.points],
            "termination": None if self.termination is None else {
                "alpha_star": self.termination.alpha_star,
                "kappa": self.termination.kappa,
                "fold": self.termination.fold,
            },
        }
        return json.dumps(doc, indent=1)

    @classmethod
    def from_json(cls, text: str) -> "Branch":
        doc = json.loads(text)
        pts = [BranchPoint(p["alpha"], p["u0"], p["maxima"], p["residual"])
               for p in doc["points"]]
        term = doc.get("termination")
        rec = None if term is None else TerminationRecord(
            term["alpha_star"], term.get("kappa"), bool(term.get("fold")))
        return cls(label_n=doc["label_n"], points=pts, termination=rec)


def count_maxima(x: np.ndarray, u: np.ndarray, du: np.ndarray | None = None) -> int:
    """Interior local maxima of the even extension of a half-line profile.

    Strict three-point comparison with a noise floor of 1e-9 max|u|; the
    centre x = 0 counts as one maximum when the profile bends down there.
    """
    u = np.asarray(u, dtype=float)
    if u.size < 3:
        return 0
    floor = 1e-9 * float(np.max(np.abs(u)))
    count = 0
    if u[1] < u[0] - floor:
        count += 1
    interior = (u[1:-1] > u[:-2] + floor) & (u[1:-1] > u[2:] + floor)
    count += 2 * int(np.count_nonzero(interior))
    return count


def profile_maxima(traj: Trajectory) -> int:
    xs, us, dus = traj.trusted()
    return count_maxima(xs, us, dus)


def make_branch_point(f: ForcingProfile, alpha: float, u0: float,
                      cfg: IvpConfig | None = None) -> BranchPoint:
    """Evaluate the profile diagnostics at a converged root."""
    traj = integrate_ivp(f, alpha, u0, cfg)
    xs, us, dus = traj.trusted()
    residual = float(math.hypot(us[-1], dus[-1]))
    return BranchPoint(alpha=float(alpha), u0=float(u0),
                       maxima_count=profile_maxima(traj),
                       horizon_residual=residual)


def _cfg_for(f: ForcingProfile, alpha: float, cfg: IvpConfig | None,
             n_hint: int) -> IvpConfig:
    if cfg is not None:
        return cfg
    return default_config(f, alpha, n_hint=max(4, n_hint))


def _correct_along_normal(f: ForcingProfile, pred: np.ndarray, normal: np.ndarray,
                          scales: np.ndarray, radius: float, cfg: IvpConfig,
                          n_probe: int = 41, relax_depth: bool = False) -> np.ndarray | None:
    """Bisection correction transverse to the continuation direction.

    Classifies trajectories along pred + t * normal (t in scaled units up
    to ``radius``) and refines a sign change; returns the corrected
    (alpha, u0) or None when the segment shows no genuine flip.

    ``relax_depth`` skips the survival-depth check; needed for the
    marginal 1/x^4 forcing near its termination spiral, where genuine
    profiles carry positive log-periodically oscillating tails that trip
    the classification events early.
    """

    def point(t: float) -> tuple[float, float]:
        z = pred + t * normal
        return float(z[0] * scales[0]), float(z[1] * scales[1])

    def side(t: float) -> int:
        a, u = point(t)
        if a <= 0.0:
            return +1  # beyond the solvability boundary; treat as one side
        return +1 if classify_u0(f, a, u, cfg) is Outcome.ESCAPED_POSITIVE else -1

    ts = np.linspace(-radius, radius, n_probe)
    sides = [side(t) for t in ts]
    flips = [i for i in range(n_probe - 1) if sides[i] != sides[i + 1]]
    if not flips:
        return None
    # refine the flip nearest the prediction
    i = min(flips, key=lambda j: abs(0.5 * (ts[j] + ts[j + 1])))
    lo, hi = ts[i], ts[i + 1]
    s_lo = sides[i]
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if side(mid) == s_lo:
            lo = mid
        else:
            hi = mid
    t_root = 0.5 * (lo + hi)
    a, u = point(t_root)
    if a <= 0.0:
        return None
    if not relax_depth:
        # genuineness: the corrected point must survive past event arming
        depth = min(decision_depth(f, a, u - 4.0 * cfg.bisect_tol, cfg),
                    decision_depth(f, a, u + 4.0 * cfg.bisect_tol, cfg))
        required = cfg.x_far + max(1.5 * a ** -0.25, 12.0 * cfg.step_h)
        if depth < min(required, cfg.x_max - cfg.step_h):
            return None
    return pred + t_root * normal


def trace_branch(f: ForcingProfile, seed: BranchPoint, alpha_step: float,
                 cfg: IvpConfig | None = None, *,
                 alpha_ceiling: float = math.inf,
                 alpha_floor: float = 0.0,
                 max_points: int = 400) -> Branch:
    """Continue a branch from a converged seed in both senses of the step.

    ``alpha_step`` sets the initial continuation step (its sign selects
    the initial direction); the step contracts near folds (transverse
    re-bracketing failure) and the trace stops at the amplitude bounds,
    after ``max_points``, or when eight consecutive halvings fail to
    re-bracket (candidate termination).
    """
    if alpha_step == 0.0:
        raise ValidationError("alpha_step must be non-zero")
    # near the marginal forcing's termination spiral the legitimate tails
    # oscillate log-periodically, so survival depth cannot vet roots there
    relax_depth = decay_class(f) is DecayClass.MARGINAL_QUARTIC
    n_hint = seed.maxima_count + 2
    cfg0 = _cfg_for(f, seed.alpha, cfg, n_hint)
    # verify the seed
    r = find_root_near(f, seed.alpha, seed.u0,
                       max(1e-3, 1e-6 * abs(seed.u0)), cfg0, n_scan=11)
    seed = make_branch_point(f, seed.alpha, r, cfg0)

    scales = np.array([max(1.0, 0.05 * abs(seed.alpha)),
                       max(0.5, 0.05 * abs(seed.u0))])
    branch = Branch(label_n=seed.maxima_count, points=[seed])

    # second point by a plain bisect at alpha + step
    a2 = seed.alpha + alpha_step
    cfg2 = _cfg_for(f, a2, cfg, n_hint)
    try:
        u2 = find_root_near(f, a2, seed.u0, 0.35 * scales[1], cfg2, n_scan=141)
    except BracketError as exc:
        raise SolverError(
            f"continuation could not take its first step from the seed: {exc}")
    branch.points.append(make_branch_point(f, a2, u2, cfg2))

    z_prev = np.array([seed.alpha, seed.u0]) / scales
    z_curr = np.array([a2, u2]) / scales
    ds = float(np.linalg.norm(z_curr - z_prev))
    ds_max = 4.0 * ds
    ds_min = max(1e-4 * ds, 1e-7)
    failures = 0
    while len(branch.points) < max_points:
        tangent = z_curr - z_prev
        tangent /= np.linalg.norm(tangent)
        normal = np.array([-tangent[1], tangent[0]])
        pred = z_curr + ds * tangent
        a_pred = float(pred[0] * scales[0])
        if a_pred <= alpha_floor:
            break
        if a_pred >= alpha_ceiling:
            break
        cfg_p = _cfg_for(f, a_pred, cfg, n_hint)
        corrected = _correct_along_normal(f, pred, normal, scales,
                                          radius=max(0.6 * ds, 4e-4), cfg=cfg_p,
                                          relax_depth=relax_depth)
        if corrected is None:
            failures += 1
            if failures >= 8 and ds <= ds_min:
                break  # candidate termination: step collapse
            ds = max(0.5 * ds, ds_min)
            continue
        failures = 0
        a_new = float(corrected[0] * scales[0])
        u_new = float(corrected[1] * scales[1])
        pt = make_branch_point(f, a_new, u_new, cfg_p)
        n_hint = max(n_hint, pt.maxima_count + 2)
        # fold bookkeeping on the sign of d(alpha)
        da_prev = z_curr[0] - z_prev[0]
        da_new = corrected[0] - z_curr[0]
        if da_prev * da_new < 0.0:
            branch.folds.append(len(branch.points) - 1)
        branch.points.append(pt)
        z_prev, z_curr = z_curr, corrected
        ds = min(ds * 1.5, ds_max)
    return branch


def _has_positive_plateau(f: ForcingProfile, alpha: float, u0: float,
                          cfg: IvpConfig | None) -> bool:
    """Detect the just-past-termination artefact: a trajectory riding a
    small positive, non-decaying far-field plateau that only bends down
    beyond the horizon.  A genuine decaying profile is either negative out
    there or (exactly at termination) positive but decaying at the forced
    superexponential rate."""
    traj = integrate_ivp(f, alpha, u0, cfg)
    xs, us, _ = traj.trusted()
    if xs[-1] < 10.0:
        return False
    x1 = 0.25 * xs[-1]
    x2 = 0.50 * xs[-1]
    u1 = float(np.interp(x1, xs, us))
    u2 = float(np.interp(x2, xs, us))
    floor = 1e-10 * float(np.max(np.abs(us)))
    return u1 > floor and u2 > 0.4 * u1


def root_exists(f: ForcingProfile, alpha: float, u0_guess: float,
                radius: float, cfg: IvpConfig | None = None,
                n_scan: int = 201, reject_positive_plateau: bool = False
                ) -> tuple[bool, float | None]:
    """Depth-gated root existence test used by termination bracketing."""
    try:
        r = find_root_near(f, alpha, u0_guess, radius, cfg, n_scan=n_scan)
    except BracketError:
        return False, None
    if reject_positive_plateau and _has_positive_plateau(f, alpha, r, cfg):
        return False, None
    return True, r


def locate_termination(f: ForcingProfile, branch: Branch,
                       cfg: IvpConfig | None = None, *,
                       rel_tol: float = 1e-6,
                       profile_step_h: float | None = None
                       ) -> tuple[float, Trajectory]:
    """Refine the amplitude a*_n at which the branch ceases to exist.

    Only meaningful for forcings decaying faster than 1/x^4 (or with
    compact support); for slower decay the far-field balance leaves no
    termination mechanism and the call is rejected.  Returns the refined
    amplitude and the limiting profile, whose far field decays at the
    forced (maximal) rate.
    """
    if decay_class(f) not in (DecayClass.FASTER_THAN_QUARTIC,
                              DecayClass.COMPACT_SUPPORT):
        raise ValidationError(
            "termination points require faster-than-quartic forcing decay")
    if len(branch.points) < 2:
        raise ValidationError("need a traced branch with at least two points")
    p_prev, p_end = branch.points[-2], branch.points[-1]
    n_hint = max(p.maxima_count for p in branch.points) + 2

    def cfg_at(a: float) -> IvpConfig:
        return _cfg_for(f, a, cfg, n_hint)

    direction = math.copysign(1.0, p_end.alpha - p_prev.alpha)
    step = max(abs(p_end.alpha - p_prev.alpha), 1e-4 * abs(p_end.alpha))
    # tight enough to stay on the terminating sheet (a coexisting fold
    # partner may pass nearby), wide enough to absorb extrapolation error
    radius = max(6.0 * abs(p_end.u0 - p_prev.u0), 2e-3 * max(1.0, abs(p_end.u0)))

    # march in the trace direction until the root disappears
    known = [(p_prev.alpha, p_prev.u0), (p_end.alpha, p_end.u0)]

    def extrapolate(a: float) -> float:
        (a0, u0), (a1, u1) = known[-2], known[-1]
        if a1 == a0:
            return u1
        return u1 + (u1 - u0) * (a - a1) / (a1 - a0)

    def exists(a: float) -> tuple[bool, float | None]:
        return root_exists(f, a, extrapolate(a), radius, cfg_at(a),
                           reject_positive_plateau=True)

    a_ok = None
    a_fail = None
    # the trace end may itself already sit past the true termination (its
    # corrector does not plateau-test); march whichever way is needed
    ok_end, r_end = exists(p_end.alpha)
    if ok_end:
        known.append((p_end.alpha, r_end))
        a_ok = p_end.alpha
        for _ in range(60):
            a_try = a_ok + direction * step
            ok, r = exists(a_try)
            if ok:
                known.append((a_try, r))
                a_ok = a_try
                step *= 1.6
            else:
                a_fail = a_try
                break
    else:
        a_fail = p_end.alpha
        for _ in range(60):
            a_try = a_fail - direction * step
            ok, r = exists(a_try)
            if ok:
                known.append((a_try, r))
                a_ok = a_try
                break
            a_fail = a_try
            step *= 1.6
    if a_fail is None or a_ok is None:
        raise SolverError("could not bracket the termination amplitude "
                          f"(reached {a_ok if a_fail is None else a_fail})")
    while abs(a_fail - a_ok) > rel_tol * abs(a_ok):
        a_mid = 0.5 * (a_ok + a_fail)
        ok, r = root_exists(f, a_mid, extrapolate(a_mid), radius, cfg_at(a_mid),
                            reject_positive_plateau=True)
        if ok:
            known.append((a_mid, r))
            a_ok = a_mid
        else:
            a_fail = a_mid
    alpha_star = 0.5 * (a_ok + a_fail)
    a_last, u_last = known[-1] if known[-1][0] == a_ok else \
        next((p for p in reversed(known) if p[0] == a_ok))
    cfg_prof = cfg_at(a_last)
    if profile_step_h is not None:
        # the far tail of the limiting profile is bias-limited by the RK4
        # step; re-resolve the root and profile on a finer grid
        cfg_prof = replace(cfg_prof, step_h=profile_step_h)
        u_last = find_root_near(f, a_last, u_last, radius, cfg_prof, n_scan=41)
    profile = integrate_ivp(f, a_last, u_last, cfg_prof)
    return float(alpha_star), profile


def kappa_bvp(f: ForcingProfile, alpha_star: float, x_star: np.ndarray,
              u_star: np.ndarray, sign: int = +1, *,
              x_max: float = 12.0, h: float = 2e-3) -> float:
    """Far-field limit of the first-order correction at a termination point.

    Solves u1'' + 2 u* u1 = sign * f with u1'(0) = 0 and the discrete
    boundedness condition u1'(x_max) = 0 (second-order central
    differences, banded solve), and returns u1(x_max); by linearity the
    two signs give opposite values, and the sign = +1 value is the
    constant whose positivity forces a fold in the branch.
    """
    if sign not in (+1, -1):
        raise ValidationError("sign must be +1 or -1")
    n = int(round(x_max / h)) + 1
    xs = np.linspace(0.0, x_max, n)
    ustar = np.interp(xs, x_star, u_star, right=0.0)
    rhs = sign * np.array([evaluate(f, x) for x in xs])
    inv_h2 = 1.0 / (h * h)
    diag = -2.0 * inv_h2 + 2.0 * ustar
    upper = np.full(n, inv_h2)
    lower = np.full(n, inv_h2)
    # symmetric ghosts for the Neumann conditions at both ends
    upper[1] = 2.0 * inv_h2
    lower[-2] = 2.0 * inv_h2
    ab = np.zeros((3, n))
    ab[0, 1:] = upper[1:]
    ab[1, :] = diag
    ab[2, :-1] = lower[:-1]
    try:
        u1 = solve_banded((1, 1), ab, rhs)
    except np.linalg.LinAlgError as exc:
        raise SolverError(f"singular linearised operator at a* = {alpha_star}: {exc}")
    resid = np.empty(n)
    resid[1:-1] = (u1[:-2] - 2.0 * u1[1:-1] + u1[2:]) * inv_h2 \
        + 2.0 * ustar[1:-1] * u1[1:-1] - rhs[1:-1]
    scale = float(np.max(np.abs(u1))) + 1.0
    if float(np.max(np.abs(resid[1:-1]))) > 1e-6 * scale * inv_h2 * h * h * 100:
        raise SolverError(
            "linearised solve residual too large; termination amplitude "
            "not converged enough")
    return float(u1[-1])
