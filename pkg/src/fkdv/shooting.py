"""Shooting solver: RK4 initial-value runs, blow-up classification, bisection.

Every generic trajectory of u'' + u^2 = a f(x) started from (u0, 0) blows
up at finite x toward -infinity; solutions of the decay problem are the
isolated u0 values separating trajectories that pass above the phase-plane
origin from those that turn down before reaching it.  Bisection on that
classification is the primary solver; an inward integration from the
algebraic far field is provided for the slowly decaying Lorentzian as an
independent check.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace

import numpy as np

from . import _kernels as K
from .errors import BracketError, ValidationError
from .forcings import (DecayClass, ForcingProfile, Kind, decay_class, evaluate)

_KIND_CODE = {
    Kind.TOP_HAT: K.KIND_TOP_HAT,
    Kind.GAUSSIAN: K.KIND_GAUSSIAN,
    Kind.LORENTZIAN: K.KIND_LORENTZIAN,
    Kind.HYBRID: K.KIND_HYBRID,
    Kind.MARGINAL_QUARTIC: K.KIND_MARGINAL,
}


class Outcome(enum.Enum):
    REACHED_HORIZON = "reached_horizon"
    ESCAPED_NEGATIVE = "escaped_negative"
    ESCAPED_POSITIVE = "escaped_positive"


_OUTCOME_FROM_CODE = {
    K.OUT_HORIZON: Outcome.REACHED_HORIZON,
    K.OUT_NEGATIVE: Outcome.ESCAPED_NEGATIVE,
    K.OUT_POSITIVE: Outcome.ESCAPED_POSITIVE,
}


@dataclass(frozen=True)
class IvpConfig:
    """Fixed-step RK4 configuration.

    ``x_far`` is the abscissa beyond which the phase-plane classification
    events are armed (past the oscillatory core); None selects a
    forcing-aware default.  ``record_stride`` thins the stored samples of
    recorded trajectories; classification runs never record.
    """

    step_h: float = 1e-3
    x_max: float = 40.0
    blowup_threshold: float = 1e6
    bisect_tol: float = 1e-12
    x_far: float | None = None
    record_stride: int = 1

    def __post_init__(self):
        if not 0.0 < self.step_h <= 0.01:
            raise ValidationError(f"step_h must lie in (0, 0.01], got {self.step_h}")
        if self.x_max < 20.0:
            raise ValidationError(f"x_max must be >= 20, got {self.x_max}")
        if self.blowup_threshold < 100.0:
            raise ValidationError(
                f"blowup_threshold must be >= 100, got {self.blowup_threshold}")
        if self.bisect_tol <= 0.0:
            raise ValidationError("bisect_tol must be positive")
        if self.record_stride < 1:
            raise ValidationError("record_stride must be >= 1")


def _support_x_far(f: ForcingProfile, alpha: float) -> float:
    """Abscissa beyond which the forcing no longer competes with the
    homogeneous far-field balance 36/x^4 (fast decay only)."""
    x = 3.0
    for _ in range(60):
        if alpha * evaluate(f, x) <= 0.36 / x ** 4:
            break
        x += 0.25
    return max(4.0, x)


def cluster_x_far(f: ForcingProfile, alpha: float, y_edge: float) -> float:
    """Event-arming abscissa past a soliton cluster whose outermost peak
    sits at y_edge (in the stretched variable y = alpha^{1/4} x).

    Classification events must stay disarmed while the legitimate profile
    still has du/dx < 0, i.e. until the outermost soliton's falling
    exponential tail hands over to the rising quasi-static envelope
    -sqrt(alpha f(x)); the handover abscissa follows from equating the two
    slopes.  A further 1.5 stretched units of safety margin keeps events
    off the legitimate profile while leaving the classification window
    around a root comfortably wide.
    """
    delta = alpha ** -0.25
    x_e = max(y_edge * delta, 0.05)
    fe = evaluate(f, x_e)
    # |d/dx sqrt(f)| at the cluster edge, per unit sqrt(alpha)
    eps = 1e-6
    env = abs(math.sqrt(max(evaluate(f, x_e + eps), 0.0)) - math.sqrt(max(fe, 0.0))) / eps
    env = max(env, 1e-12)
    dy_handover = math.log(12.0 * math.sqrt(2.0) * alpha ** 0.25 / env) / math.sqrt(2.0)
    return (y_edge + dy_handover + 1.5) * delta


def _y_edge_estimate(alpha: float, n_homoclinics: int) -> float:
    """Crude leading-log estimate of the outermost soliton peak location
    for an n-homoclinic profile (exact values live in the glueing module;
    this only needs to be an over-estimate for event arming)."""
    delta = alpha ** -0.25
    log_inv_delta = max(math.log(1.0 / delta), 0.7)
    pairs = max((n_homoclinics - 1), 1)
    return pairs / math.sqrt(2.0) * log_inv_delta + 2.5


def auto_x_far(f: ForcingProfile, alpha: float, n_hint: int = 4) -> float:
    """Default event-arming abscissa.

    Top hat: just past the support.  Moderate amplitudes: past the region
    where the forcing competes with the homogeneous balance (fast decay)
    or a fixed margin (slow decay).  Large amplitudes: past the estimated
    soliton cluster, where deviations are caught before the quasi-static
    tail amplifies them beyond recognition; n_hint bounds the homoclinic
    count the estimate must cover.
    """
    if f.kind is Kind.TOP_HAT:
        # beyond the support the profile rises monotonically along the
        # stable manifold, so events are valid immediately past the jump
        return f.param + 0.05
    slow = decay_class(f) in (DecayClass.SLOWER_THAN_QUARTIC,
                              DecayClass.MARGINAL_QUARTIC)
    if alpha <= 500.0:
        if slow:
            return min(6.0, cluster_x_far(f, alpha, _y_edge_estimate(alpha, n_hint)))
        return _support_x_far(f, alpha)
    clustered = cluster_x_far(f, alpha, _y_edge_estimate(alpha, n_hint))
    if slow:
        return clustered
    return min(_support_x_far(f, alpha), clustered)


def default_config(f: ForcingProfile, alpha: float,
                   n_hint: int = 4) -> IvpConfig:
    """Forcing- and amplitude-aware defaults.

    The step shrinks with the a^{-1/4} core length scale; the horizon
    grows both for slowly decaying forcings and for the wide small-a outer
    region.  n_hint bounds the homoclinic count the event arming must
    accommodate (callers tracking a specific branch pass its count).
    """
    slow = decay_class(f) in (DecayClass.SLOWER_THAN_QUARTIC,
                              DecayClass.MARGINAL_QUARTIC)
    x_max = 200.0 if slow else 40.0
    if 0.0 < alpha < 0.1:
        x_max = max(x_max, min(400.0, 14.0 * alpha ** (-1.0 / 3.0)))
    h = min(1e-3, 0.02 * alpha ** -0.25) if alpha > 0.0 else 1e-3
    return IvpConfig(step_h=h, x_max=x_max, x_far=auto_x_far(f, alpha, n_hint))


@dataclass
class Trajectory:
    """A sampled phase path (x, u, du/dx) with blow-up metadata.

    ``decision_index`` is the number of leading samples up to and
    including the classification event; samples beyond it belong to the
    post-decision plunge and are excluded from profile diagnostics such as
    maxima counting.  ``x0_estimate`` fits u ~ -6/(x + x0)^2 to the last
    two samples of a negative escape; ``residual`` is ||(u, u')|| at the
    horizon for trajectories that reach it.
    """

    x: np.ndarray
    u: np.ndarray
    du: np.ndarray
    outcome: Outcome
    x0_estimate: float | None = None
    residual: float | None = None
    decision_index: int | None = None
    decision_x: float | None = None

    def trusted(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Samples up to the classification event."""
        n = self.decision_index if self.decision_index is not None else len(self.x)
        return self.x[:n], self.u[:n], self.du[:n]


def _resolved(f: ForcingProfile, alpha: float, cfg: IvpConfig | None) -> IvpConfig:
    if cfg is None:
        return default_config(f, alpha)
    if cfg.x_far is None:
        return replace(cfg, x_far=auto_x_far(f, alpha))
    return cfg


def integrate_ivp(f: ForcingProfile, alpha: float, u0: float,
                  cfg: IvpConfig | None = None) -> Trajectory:
    """RK4 shooting run from (u0, 0); terminates at blow-up, a phase-plane
    classification event plus plunge, or the horizon x_max."""
    if alpha <= 0.0:
        raise ValidationError("integrate_ivp requires alpha > 0 (solvability)")
    cfg = _resolved(f, alpha, cfg)
    kind = _KIND_CODE[f.kind]
    n_steps = int(math.ceil(cfg.x_max / cfg.step_h))
    n_cap = n_steps // cfg.record_stride + 16
    xs = np.empty(n_cap)
    us = np.empty(n_cap)
    vs = np.empty(n_cap)
    out_code, n_rec, decide_rec, x_decide = K.shoot_record(
        kind, f.param, alpha, u0, cfg.step_h, cfg.x_max,
        cfg.blowup_threshold, cfg.x_far, cfg.record_stride, xs, us, vs)
    outcome = _OUTCOME_FROM_CODE[out_code]
    traj = Trajectory(x=xs[:n_rec].copy(), u=us[:n_rec].copy(),
                      du=vs[:n_rec].copy(), outcome=outcome,
                      decision_index=min(decide_rec, n_rec),
                      decision_x=x_decide)
    if outcome is Outcome.ESCAPED_NEGATIVE:
        tail = traj.u[-2:]
        xtail = traj.x[-2:]
        ests = [-xx - math.sqrt(-6.0 / uu) for xx, uu in zip(xtail, tail) if uu < 0.0]
        traj.x0_estimate = float(np.mean(ests)) if ests else None
    elif outcome is Outcome.REACHED_HORIZON:
        traj.residual = float(math.hypot(traj.u[-1], traj.du[-1]))
    return traj


def classify_u0(f: ForcingProfile, alpha: float, u0: float,
                cfg: IvpConfig | None = None) -> Outcome:
    """Escape classification only (no recording); fast path for bisection."""
    if alpha <= 0.0:
        raise ValidationError("classification requires alpha > 0")
    cfg = _resolved(f, alpha, cfg)
    code = K.classify(_KIND_CODE[f.kind], f.param, alpha, u0, cfg.step_h,
                      cfg.x_max, cfg.blowup_threshold, cfg.x_far)
    return _OUTCOME_FROM_CODE[code]


def _side(outcome: Outcome) -> int:
    return +1 if outcome is Outcome.ESCAPED_POSITIVE else -1


def bisect_u0(f: ForcingProfile, alpha: float, bracket: tuple[float, float],
              cfg: IvpConfig | None = None) -> float:
    """Bisect the initial amplitude u0 between opposite escape classes.

    The bracket endpoints must classify to opposite sides; the bracket
    retains that property at every iteration.  Returns the midpoint of the
    final bracket, of width <= bisect_tol (or two ulps, whichever is
    larger).
    """
    cfg = _resolved(f, alpha, cfg)
    lo, hi = float(bracket[0]), float(bracket[1])
    if not lo < hi:
        raise ValidationError(f"bracket must satisfy lo < hi, got {bracket}")
    out_lo = classify_u0(f, alpha, lo, cfg)
    out_hi = classify_u0(f, alpha, hi, cfg)
    if out_lo is Outcome.REACHED_HORIZON:
        return lo
    if out_hi is Outcome.REACHED_HORIZON:
        return hi
    s_lo, s_hi = _side(out_lo), _side(out_hi)
    if s_lo == s_hi:
        raise BracketError(
            f"bracket endpoints classify identically ({out_lo.value} / {out_hi.value}) "
            f"at alpha={alpha}, bracket={bracket}", out_lo, out_hi)
    while hi - lo > cfg.bisect_tol:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break  # bracket at floating-point resolution
        out_mid = classify_u0(f, alpha, mid, cfg)
        if out_mid is Outcome.REACHED_HORIZON:
            return mid
        if _side(out_mid) == s_lo:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def scan_brackets(f: ForcingProfile, alpha: float, u0_lo: float, u0_hi: float,
                  n: int = 200, cfg: IvpConfig | None = None
                  ) -> list[tuple[float, float]]:
    """Brackets (sign changes of the escape classification) on a u0 grid."""
    cfg = _resolved(f, alpha, cfg)
    grid = np.linspace(u0_lo, u0_hi, n)
    sides = [_side(classify_u0(f, alpha, g, cfg)) for g in grid]
    return [(float(grid[i]), float(grid[i + 1]))
            for i in range(n - 1) if sides[i] != sides[i + 1]]


def decision_depth(f: ForcingProfile, alpha: float, u0: float,
                   cfg: IvpConfig | None = None) -> float:
    """Abscissa at which the trajectory's classification event fires.

    Grows without bound as u0 approaches a genuine solution (the
    trajectory shadows the decaying profile ever longer), whereas the
    spurious classification flips produced by deviations that cross the
    axis before event arming stay pinned near x_far.  Used to tell a true
    root apart from such artefacts.
    """
    cfg = _resolved(f, alpha, cfg)
    kind = _KIND_CODE[f.kind]
    out = K.shoot(kind, f.param, alpha, u0, cfg.step_h, cfg.x_max,
                  cfg.blowup_threshold, cfg.x_far, True)
    return float(out[4])


def find_root_near(f: ForcingProfile, alpha: float, guess: float,
                   radius: float, cfg: IvpConfig | None = None,
                   n_scan: int = 161, depth_gate: bool = True) -> float:
    """Locate the genuine bisection root within guess +- radius.

    Scans for classification flips, refines each, and returns the root
    whose neighbourhood survives deepest before classifying (the true
    separatrix).  With ``depth_gate`` the winner must additionally survive
    visibly past the arming abscissa, which rejects the spurious flips
    produced by deviations crossing the axis before events arm; this is
    what makes "no root here" a trustworthy statement during termination
    bracketing.  Raises BracketError when nothing genuine is found.
    """
    cfg = _resolved(f, alpha, cfg)
    brackets = scan_brackets(f, alpha, guess - radius, guess + radius, n_scan, cfg)
    if not brackets:
        raise BracketError(
            f"no classification flip within {radius} of u0={guess} at alpha={alpha}")
    roots = [bisect_u0(f, alpha, b, cfg) for b in brackets]
    probe = max(cfg.bisect_tol, 1e-11 * max(1.0, abs(guess)))
    depths = [min(decision_depth(f, alpha, r - probe, cfg),
                  decision_depth(f, alpha, r + probe, cfg)) for r in roots]
    best = int(np.argmax(depths))
    if depth_gate:
        required = cfg.x_far + max(2.5 * alpha ** -0.25, 12.0 * cfg.step_h)
        if depths[best] < min(required, cfg.x_max - cfg.step_h):
            raise BracketError(
                f"only spurious classification flips within {radius} of "
                f"u0={guess} at alpha={alpha} (max depth {depths[best]:.3g}, "
                f"arming at {cfg.x_far:.3g})")
    return roots[best]


def blowup_contour_map(f: ForcingProfile, alpha_grid, u0_grid,
                       cfg: IvpConfig | None = None) -> np.ndarray:
    """Grid of blow-up abscissa parameters x0 over (alpha, u0).

    Shape (len(alpha_grid), len(u0_grid)).  Reserved values: +inf for
    positive escapes, -inf for horizon cells (the formal x0 -> -inf limit
    on a solution branch).  Solution branches appear as ridges of steeply
    negative x0.
    """
    alphas = np.asarray(alpha_grid, dtype=float)
    u0s = np.asarray(u0_grid, dtype=float)
    if alphas.size == 0 or u0s.size == 0:
        raise ValidationError("contour grids must be non-empty")
    if np.any(np.diff(alphas) <= 0.0) or np.any(np.diff(u0s) <= 0.0):
        raise ValidationError("contour grids must be strictly increasing")
    if alphas[0] <= 0.0:
        raise ValidationError("contour grid requires alpha > 0")
    cfg = _resolved(f, float(alphas[-1]), cfg)
    return K.contour_grid(_KIND_CODE[f.kind], f.param, alphas, u0s,
                          cfg.step_h, cfg.x_max, cfg.blowup_threshold,
                          cfg.x_far)


# far-field series data for the inward Lorentzian integration: the first
# three orders of the large-amplitude expansion u = sqrt(a) sum mu^n W_n
# with mu = a^{-1/2} and the negative leading root.
def _lorentzian_farfield(alpha: float, x: float) -> tuple[float, float]:
    s = 1.0 + x * x
    mu = alpha ** -0.5
    w0 = -s ** -0.5
    w0p = x * s ** -1.5
    w1 = -0.5 * (2.0 * x * x - 1.0) / (s * s)
    w1p = -2.0 * x * (2.0 - x * x) / s ** 3
    w2 = -0.625 * (4.0 * x ** 4 - 20.0 * x * x + 3.0) * s ** -3.5
    w2p = -0.625 * (-12.0 * x ** 5 + 116.0 * x ** 3 - 61.0 * x) * s ** -4.5
    root_a = math.sqrt(alpha)
    u = root_a * (w0 + mu * w1 + mu * mu * w2)
    v = root_a * (w0p + mu * w1p + mu * mu * w2p)
    return u, v


def inward_integrate_lorentzian(alpha: float, x_start: float,
                                cfg: IvpConfig | None = None
                                ) -> tuple[Trajectory, float]:
    """Integrate the Lorentzian problem from the algebraic far field to 0.

    Initial data comes from the three-term far-field series (leading
    -sqrt(a)/x balance plus two algebraic corrections).  Returns the
    trajectory (samples ascending in x) and du/dx(0), whose magnitude is
    the symmetry residual to drive to zero over alpha.  Validation path
    only: the inward-growing recessive mode amplifies far-field data error
    by exp(2 sqrt(2 sqrt(a)) sqrt(x_start)), which limits the achievable
    interior accuracy; see the module tests for measured behaviour.
    """
    if alpha <= 0.0:
        raise ValidationError("inward integration requires alpha > 0")
    if x_start < 20.0:
        raise ValidationError(
            f"x_start must be >= 20 (far-field expansion invalid), got {x_start}")
    if cfg is None:
        cfg = IvpConfig(step_h=1e-3, x_max=max(20.0, x_start))
    u_s, v_s = _lorentzian_farfield(alpha, x_start)
    n_cap = int(math.ceil(x_start / cfg.step_h)) + 2
    xs = np.empty(n_cap)
    us = np.empty(n_cap)
    vs = np.empty(n_cap)
    n = K.integrate_inward(K.KIND_LORENTZIAN, 0.0, alpha, x_start, u_s, v_s,
                           cfg.step_h, xs, us, vs)
    order = slice(n - 1, None, -1)
    traj = Trajectory(x=xs[:n][order].copy(), u=us[:n][order].copy(),
                      du=vs[:n][order].copy(), outcome=Outcome.REACHED_HORIZON)
    traj.residual = float(math.hypot(traj.u[-1], traj.du[-1]))
    return traj, float(traj.du[0])
