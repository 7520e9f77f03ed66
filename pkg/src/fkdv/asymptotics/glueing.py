"""Homoclinic glueing: pulse-count sequences, amplitude predictions, profiles.

Large-amplitude solutions with several maxima are assembled from copies of
the pulse U0H(y) = 3 sech^2(y/sqrt 2) - 1 (in y = a^{1/4} x, U = u/sqrt a)
whose exponential tails are matched through the ladder

    Lambda_{k+1} = Lambda_k + (sqrt 2 / 8) f''(0) Y_k,

an odd count 2n-1 placing pulses at {0, +-Y_1, ..., +-Y_{n-1}} with
Y_{k+1} = Y_k + log(12 / (Lambda_{k+1} delta^2)) / sqrt 2, and an even
count 2n placing them at {+-Y_1, ..., +-Y_n} around a flat U = -1 core,
with the spacing update using Lambda_k instead.  The count is selected by
the closure Lambda_n = 0, solved for the free constant (the centre
correction U_10 for odd counts via Lambda_1 = (log 2) f''(0)/8 - U_10/16,
the first spacing Y_1 for even counts via the transcendental balance
12 delta^{-2} e^{-2 sqrt 2 Y_1} = -(sqrt 2/8) f''(0) Y_1).  All of this
requires a forcing with a genuine local maximum, f''(0) < 0, and pulse
spacings small on the outer scale: n delta^2 log(1/delta) < 0.05.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import SolverError, ValidationError
from ..forcings import ForcingProfile, second_derivative_at_zero
from .glue_functions import SQRT2, phi_glue, psi_k, u0_homoclinic


@dataclass(frozen=True)
class GlueingPlan:
    """Solved pulse arrangement for one homoclinic count at one amplitude.

    ``Lambda_seq`` and ``Y_seq`` hold the ladder values Lambda_1..Lambda_n
    and spacings Y_1..Y_{n-1 or n}; ``peak_locations`` are physical x
    positions.  ``u10`` is the centre-pulse correction constant (odd
    counts only).
    """

    n_homoclinics: int
    parity: str
    alpha: float
    delta: float
    f2: float  # f''(0)
    Lambda_seq: tuple[float, ...]
    Y_seq: tuple[float, ...]
    u10: float | None
    u0_prediction: float
    peak_locations: tuple[float, ...]

    @property
    def u0_seed(self) -> float:
        """Sharper centre-amplitude estimate for seeding the numerical
        solver: keeps the solved constants that the headline predictions
        round away (log-accurate only)."""
        root_a = math.sqrt(self.alpha)
        if self.parity == "odd":
            return 2.0 * root_a + (self.u10 or 0.0)
        return self.u0_prediction - 0.25 * self.f2


def _newton_bisect(fn, lo: float, hi: float, tol: float = 1e-14,
                   max_iter: int = 200) -> float:
    """Safeguarded Newton (secant derivative) with a bisection fallback."""
    f_lo, f_hi = fn(lo), fn(hi)
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if f_lo * f_hi > 0.0:
        raise SolverError(f"closure bracket [{lo}, {hi}] does not straddle a root")
    x = 0.5 * (lo + hi)
    for _ in range(max_iter):
        fx = fn(x)
        if fx == 0.0 or hi - lo < tol * max(1.0, abs(x)):
            return x
        if f_lo * fx < 0.0:
            hi, f_hi = x, fx
        else:
            lo, f_lo = x, fx
        h = 1e-7 * max(abs(x), 1e-3)
        dfx = (fn(x + h) - fx) / h
        x_newton = x - fx / dfx if dfx != 0.0 else lo
        x = x_newton if lo < x_newton < hi else 0.5 * (lo + hi)
    return x


def _odd_ladder(lambda1: float, n: int, f2: float, delta: float
                ) -> tuple[list[float], list[float]]:
    """Lambda_1..Lambda_n and Y_1..Y_{n-1} for an odd count 2n-1."""
    lambdas = [lambda1]
    ys: list[float] = []
    d2 = delta * delta
    for k in range(1, n):
        if lambdas[-1] <= 0.0:
            return lambdas, ys  # outside the admissible ladder domain
        y_inc = math.log(12.0 / (lambdas[-1] * d2)) / SQRT2
        ys.append((ys[-1] if ys else 0.0) + y_inc)
        lambdas.append(lambdas[-1] + (SQRT2 / 8.0) * f2 * ys[-1])
    return lambdas, ys


def _even_ladder(y1: float, n: int, f2: float, delta: float
                 ) -> tuple[list[float], list[float]]:
    """Lambda_1..Lambda_n and Y_1..Y_n for an even count 2n."""
    d2 = delta * delta
    lambdas = [12.0 / d2 * math.exp(-2.0 * SQRT2 * y1) + (SQRT2 / 8.0) * f2 * y1]
    ys = [y1]
    for k in range(1, n):
        if lambdas[-1] <= 0.0:
            return lambdas, ys
        ys.append(ys[-1] + math.log(12.0 / (lambdas[-1] * d2)) / SQRT2)
        lambdas.append(lambdas[-1] + (SQRT2 / 8.0) * f2 * ys[-1])
    return lambdas, ys


def solve_glueing_plan(f: ForcingProfile, alpha: float,
                       n_homoclinics: int) -> GlueingPlan:
    """Solve the tail-matching closure for the requested pulse count."""
    if n_homoclinics < 1:
        raise ValidationError("need at least one homoclinic")
    if alpha < 1e4:
        raise ValidationError("glueing requires alpha >= 1e4")
    f2 = second_derivative_at_zero(f)
    if f2 >= 0.0:
        raise ValidationError("glueing requires a forcing maximum, f''(0) < 0")
    delta = alpha ** -0.25
    validity = n_homoclinics * delta * delta * math.log(1.0 / delta)
    if validity >= 0.05:
        raise ValidationError(
            f"pulse count outside the validity bound: n delta^2 log(1/delta) "
            f"= {validity:.3g} >= 0.05")
    root_a = math.sqrt(alpha)
    d2 = delta * delta

    if n_homoclinics % 2 == 1:
        n = (n_homoclinics + 1) // 2
        if n == 1:
            lam1 = 0.0
            lambdas, ys = [0.0], []
        else:
            guess = -0.25 * f2 * math.log(1.0 / delta)

            def closure(lam1: float) -> float:
                lams, _ = _odd_ladder(lam1, n, f2, delta)
                return lams[-1] if len(lams) == n else -1.0

            lo = guess
            while closure(lo) > 0.0:
                lo *= 0.5
            hi = guess
            while closure(hi) < 0.0:
                hi *= 2.0
            lam1 = _newton_bisect(closure, lo, hi)
            lambdas, ys = _odd_ladder(lam1, n, f2, delta)
        u10 = 2.0 * math.log(2.0) * f2 - 16.0 * lambdas[0]
        if n_homoclinics == 1:
            u0_pred = 2.0 * root_a + u10
        elif n_homoclinics == 3:
            u0_pred = 2.0 * root_a + 4.0 * f2 * math.log(1.0 / delta)
        else:
            u0_pred = 2.0 * root_a + u10
        peaks_y = [0.0] + [y for y in ys]
        peaks = sorted({-p for p in peaks_y} | set(peaks_y))
        return GlueingPlan(n_homoclinics=n_homoclinics, parity="odd",
                           alpha=alpha, delta=delta, f2=f2,
                           Lambda_seq=tuple(lambdas), Y_seq=tuple(ys),
                           u10=u10, u0_prediction=u0_pred,
                           peak_locations=tuple(delta * p for p in peaks))

    n = n_homoclinics // 2

    def closure(y1: float) -> float:
        lams, _ = _even_ladder(y1, n, f2, delta)
        return lams[-1] if len(lams) == n else -1.0

    # leading-log guess for the first spacing
    log_inv = math.log(1.0 / delta)
    guess = (log_inv / SQRT2
             - math.log(log_inv / SQRT2) / (2.0 * SQRT2)
             + math.log(-96.0 / (SQRT2 * f2)) / (2.0 * SQRT2))
    guess *= max(1, 2 * n - 1)
    lo = 0.5 * guess
    while closure(lo) < 0.0 and lo > 1e-3:
        lo *= 0.5
    hi = guess
    while closure(hi) > 0.0:
        hi *= 1.5
    y1 = _newton_bisect(closure, lo, hi)
    lambdas, ys = _even_ladder(y1, n, f2, delta)
    u0_pred = -root_a + alpha ** 0.25 * math.sqrt(-6.0 * SQRT2 * f2 * ys[0])
    peaks = sorted({-y for y in ys} | set(ys))
    return GlueingPlan(n_homoclinics=n_homoclinics, parity="even",
                       alpha=alpha, delta=delta, f2=f2,
                       Lambda_seq=tuple(lambdas), Y_seq=tuple(ys),
                       u10=None, u0_prediction=u0_pred,
                       peak_locations=tuple(delta * p for p in peaks))


def glueing_profile(f: ForcingProfile, alpha: float, plan: GlueingPlan, x):
    """Composite glued profile u(x) (even in x).

    Around each pulse: u = sqrt(a) U0H(y - Y_k) + theta_k; in the odd
    centre: u = sqrt(a) U0H(y) + U_1(y) with U_1 = U_10 Phi_s(y/sqrt 2) +
    (1/2) f''(0) Phi_p^{(2)}(y/sqrt 2); in the even core: u = -sqrt(a) +
    U_1 with the explicit flat-core correction.  Region boundaries sit
    midway between pulse centres.
    """
    root_a = math.sqrt(alpha)
    delta = plan.delta
    # positive-side pulse centres in y
    if plan.parity == "odd":
        centers = [0.0] + list(plan.Y_seq)
    else:
        centers = list(plan.Y_seq)
    bounds = [0.5 * (centers[i] + centers[i + 1]) for i in range(len(centers) - 1)]
    if plan.parity == "even":
        bounds = [0.5 * centers[0]] + bounds

    def one(xx: float) -> float:
        y = abs(xx) / delta
        region = 0
        while region < len(bounds) and y > bounds[region]:
            region += 1
        if plan.parity == "odd":
            if region == 0:
                u1 = (plan.u10 * _phi_s_scaled(y)
                      + 0.5 * plan.f2 * _phi_p2_scaled(y))
                return root_a * u0_homoclinic(y) + u1
            yk = y - plan.Y_seq[region - 1]
            return root_a * u0_homoclinic(yk) + _theta_odd(plan, region, yk)
        if region == 0:
            d2 = delta * delta
            Y1 = plan.Y_seq[0]
            u1 = (-0.25 * plan.f2 * (y * y + 1.0)
                  + 12.0 / d2 * (math.exp(SQRT2 * (y - Y1))
                                 + math.exp(-SQRT2 * (y + Y1))))
            return -root_a + u1
        yk = y - plan.Y_seq[region - 1]
        return root_a * u0_homoclinic(yk) + _theta_even(plan, region, yk)

    xs = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.array([one(xx) for xx in xs])
    return out if np.ndim(x) else float(out[0])


def _phi_s_scaled(y: float) -> float:
    from .glue_functions import phi_s
    return phi_s(y / SQRT2)


def _phi_p2_scaled(y: float) -> float:
    from .glue_functions import phi_p2
    return phi_p2(y / SQRT2)


def _theta_odd(plan: GlueingPlan, k: int, yk: float) -> float:
    # pulse k sits at Y_k; its spacing (and incoming exponential) carries
    # Lambda_k = Lambda_seq[k-1]
    Y = plan.Y_seq[k - 1]
    lam = plan.Lambda_seq[k - 1]
    return (lam * phi_glue(yk)
            + 0.5 * plan.f2 * (Y * Y * psi_k(0, yk)
                               + 2.0 * Y * psi_k(1, yk) + psi_k(2, yk)))


def _theta_even(plan: GlueingPlan, k: int, yk: float) -> float:
    Y = plan.Y_seq[k - 1]
    if k == 1:
        lam = 12.0 / (plan.delta ** 2) * math.exp(-2.0 * SQRT2 * plan.Y_seq[0])
    else:
        # even-count spacings are set by the previous ladder value
        lam = plan.Lambda_seq[k - 2]
    return (lam * phi_glue(yk)
            + 0.5 * plan.f2 * (Y * Y * psi_k(0, yk)
                               + 2.0 * Y * psi_k(1, yk) + psi_k(2, yk)))
