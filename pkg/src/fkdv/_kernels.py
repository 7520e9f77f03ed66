"""Numba kernels for the shooting integrator and the blow-up contour map.

All kernels use classical fixed-step RK4 on the first-order system
(u, v)' = (v, a*f(x) - u^2).  Outcome codes: 0 = reached the horizon,
1 = escaped negative (finite-x blow-up toward -infinity), 2 = escaped
positive (trajectory passed above the origin in the phase plane).

Classification events beyond the raw |u| threshold fire only for
x >= x_far, past the oscillatory core of the profile:

- u >= 0 with du/dx > 0: the trajectory crosses above the origin (code 2);
- u < 0 with du/dx < 0: the trajectory turns down before reaching the
  origin and will blow up negative (code 1).

With ``early_exit`` false the integration continues after the second event
until the |u| threshold so the blow-up abscissa can be fitted from the
final samples.
"""

from __future__ import annotations

import numpy as np
from numba import njit, prange

KIND_TOP_HAT = 0
KIND_GAUSSIAN = 1
KIND_LORENTZIAN = 2
KIND_HYBRID = 3
KIND_MARGINAL = 4

OUT_HORIZON = 0
OUT_NEGATIVE = 1
OUT_POSITIVE = 2


@njit(cache=True)
def forcing_value(kind, param, x):
    if kind == KIND_TOP_HAT:
        ax = abs(x)
        if ax < param:
            return 1.0
        if ax > param:
            return 0.0
        return 0.5
    x2 = x * x
    if kind == KIND_GAUSSIAN:
        return np.exp(-x2)
    if kind == KIND_LORENTZIAN:
        return 1.0 / (1.0 + x2)
    if kind == KIND_HYBRID:
        return np.exp(-(1.0 - param) * x2) / (1.0 + param * x2)
    return 1.0 / (1.0 + x2 * x2)


@njit(cache=True, inline="always")
def _accel(kind, param, alpha, x, u):
    return alpha * forcing_value(kind, param, x) - u * u


@njit(cache=True)
def rk4_step(kind, param, alpha, x, u, v, h):
    k1u = v
    k1v = _accel(kind, param, alpha, x, u)
    xm = x + 0.5 * h
    k2u = v + 0.5 * h * k1v
    k2v = _accel(kind, param, alpha, xm, u + 0.5 * h * k1u)
    k3u = v + 0.5 * h * k2v
    k3v = _accel(kind, param, alpha, xm, u + 0.5 * h * k2u)
    k4u = v + h * k3v
    k4v = _accel(kind, param, alpha, x + h, u + h * k3u)
    un = u + (h / 6.0) * (k1u + 2.0 * k2u + 2.0 * k3u + k4u)
    vn = v + (h / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
    return un, vn


@njit(cache=True)
def _rk4_step_const(fa, x, u, v, h):
    # constant-forcing step (u'' + u^2 = fa); used for the piecewise-exact
    # top-hat integration so the jump never falls inside a step
    k1u = v
    k1v = fa - u * u
    u2 = u + 0.5 * h * k1u
    k2u = v + 0.5 * h * k1v
    k2v = fa - u2 * u2
    u3 = u + 0.5 * h * k2u
    k3u = v + 0.5 * h * k2v
    k3v = fa - u3 * u3
    u4 = u + h * k3u
    k4u = v + h * k3v
    k4v = fa - u4 * u4
    un = u + (h / 6.0) * (k1u + 2.0 * k2u + 2.0 * k3u + k4u)
    vn = v + (h / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
    return un, vn


@njit(cache=True)
def step_once(kind, param, alpha, x, u, v, h):
    """One step of size <= h; returns (x_new, u_new, v_new).

    For the top hat the step is clipped to land exactly on the jump at
    x = param and each sub-interval is integrated with its constant
    forcing value, preserving full fourth-order accuracy.
    """
    if kind == KIND_TOP_HAT:
        if x < param:
            hh = min(h, param - x)
            un, vn = _rk4_step_const(alpha, x, u, v, hh)
            return x + hh, un, vn
        un, vn = _rk4_step_const(0.0, x, u, v, h)
        return x + h, un, vn
    un, vn = rk4_step(kind, param, alpha, x, u, v, h)
    return x + h, un, vn


@njit(cache=True)
def shoot(kind, param, alpha, u0, h, x_max, blowup, x_far, early_exit):
    """Integrate from (u0, 0) at x = 0.

    Returns (outcome, x_end, u_end, v_end, x_decide, xa, ua, xb, ub) where
    (xa, ua) and (xb, ub) are the last two samples (for blow-up fitting)
    and x_decide is the abscissa at which the outcome event fired (or
    x_end for horizon runs).
    """
    n_steps = int(np.ceil(x_max / h)) + 8
    x = 0.0
    u = u0
    v = 0.0
    xa = 0.0
    ua = u0
    outcome = -1
    x_decide = x_max
    for i in range(n_steps):
        if x >= x_max - 1e-12:
            break
        xn, un, vn = step_once(kind, param, alpha, x, u, v, h)
        xa = x
        ua = u
        x = xn
        if not (np.isfinite(un) and np.isfinite(vn)):
            if outcome == -1:
                outcome = OUT_NEGATIVE if u < 0.0 else OUT_POSITIVE
                x_decide = x
            return outcome, x, u, v, x_decide, xa, ua, x, u
        u = un
        v = vn
        if u <= -blowup:
            if outcome == -1:
                outcome = OUT_NEGATIVE
                x_decide = x
            return outcome, x, u, v, x_decide, xa, ua, x, u
        if u >= blowup:
            if outcome == -1:
                outcome = OUT_POSITIVE
                x_decide = x
            return outcome, x, u, v, x_decide, xa, ua, x, u
        if outcome == -1 and x >= x_far:
            if u >= 0.0 and v > 0.0:
                outcome = OUT_POSITIVE
                x_decide = x
                return outcome, x, u, v, x_decide, xa, ua, x, u
            if u < 0.0 and v < 0.0:
                outcome = OUT_NEGATIVE
                x_decide = x
                if early_exit:
                    return outcome, x, u, v, x_decide, xa, ua, x, u
    if outcome == -1:
        outcome = OUT_HORIZON
        x_decide = x
    return outcome, x, u, v, x_decide, xa, ua, x, u


@njit(cache=True)
def shoot_record(kind, param, alpha, u0, h, x_max, blowup, x_far, stride,
                 xs, us, vs):
    """Recording variant of :func:`shoot` (every ``stride``-th step).

    Fills the preallocated arrays and returns
    (outcome, n_recorded, decide_rec_index, x_decide).  decide_rec_index is
    the number of records up to and including the outcome event (records
    beyond it belong to the post-decision plunge).
    """
    n_steps = int(np.ceil(x_max / h)) + 8
    x = 0.0
    u = u0
    v = 0.0
    xs[0] = 0.0
    us[0] = u0
    vs[0] = 0.0
    n_rec = 1
    outcome = -1
    x_decide = x_max
    decide_rec = -1
    for i in range(n_steps):
        if x >= x_max - 1e-12:
            break
        x, un, vn = step_once(kind, param, alpha, x, u, v, h)
        if not (np.isfinite(un) and np.isfinite(vn)):
            if outcome == -1:
                outcome = OUT_NEGATIVE if u < 0.0 else OUT_POSITIVE
                x_decide = x
            break
        u = un
        v = vn
        if (i + 1) % stride == 0 or i == n_steps - 1:
            xs[n_rec] = x
            us[n_rec] = u
            vs[n_rec] = v
            n_rec += 1
        if abs(u) >= blowup:
            if outcome == -1:
                outcome = OUT_NEGATIVE if u < 0.0 else OUT_POSITIVE
                x_decide = x
            break
        if outcome == -1 and x >= x_far:
            if u >= 0.0 and v > 0.0:
                outcome = OUT_POSITIVE
                x_decide = x
                decide_rec = n_rec
                break
            if u < 0.0 and v < 0.0:
                outcome = OUT_NEGATIVE
                x_decide = x
                decide_rec = n_rec
    if outcome == -1:
        outcome = OUT_HORIZON
        x_decide = x
    if xs[n_rec - 1] < x and n_rec < xs.shape[0]:
        xs[n_rec] = x
        us[n_rec] = u
        vs[n_rec] = v
        n_rec += 1
    if decide_rec < 0:
        decide_rec = n_rec
    return outcome, n_rec, decide_rec, x_decide


@njit(cache=True)
def classify(kind, param, alpha, u0, h, x_max, blowup, x_far):
    outcome, _, _, _, _, _, _, _, _ = shoot(
        kind, param, alpha, u0, h, x_max, blowup, x_far, True)
    return outcome


@njit(cache=True)
def blowup_x0(kind, param, alpha, u0, h, x_max, blowup, x_far):
    """x0 of the fitted blow-up law u = -6/(x + x0)^2, or +-inf sentinels.

    +inf: trajectory escaped positive; -inf: reached the horizon (the cell
    sits on a solution branch to within grid resolution).
    """
    outcome, x, u, v, xd, xa, ua, xb, ub = shoot(
        kind, param, alpha, u0, h, x_max, blowup, x_far, False)
    if outcome == OUT_POSITIVE:
        return np.inf
    if outcome == OUT_HORIZON:
        return -np.inf
    est = 0.0
    cnt = 0
    if ua < 0.0:
        est += -xa - np.sqrt(-6.0 / ua)
        cnt += 1
    if ub < 0.0:
        est += -xb - np.sqrt(-6.0 / ub)
        cnt += 1
    if cnt == 0:
        return -np.inf
    return est / cnt


@njit(cache=True, parallel=True)
def contour_grid(kind, param, alphas, u0s, h, x_max, blowup, x_far):
    na = alphas.shape[0]
    nu = u0s.shape[0]
    out = np.empty((na, nu))
    for idx in prange(na * nu):
        i = idx // nu
        j = idx % nu
        out[i, j] = blowup_x0(kind, param, alphas[i], u0s[j], h, x_max,
                              blowup, x_far)
    return out


@njit(cache=True)
def integrate_inward(kind, param, alpha, x_start, u_start, v_start, h,
                     xs, us, vs):
    """RK4 from x_start down to 0 (h > 0 is the step magnitude).

    Arrays are filled in descending x; returns the number of samples.
    """
    n_steps = int(np.ceil(x_start / h))
    hh = x_start / n_steps
    x = x_start
    u = u_start
    v = v_start
    xs[0] = x
    us[0] = u
    vs[0] = v
    n = 1
    for i in range(n_steps):
        un, vn = rk4_step(kind, param, alpha, x, u, v, -hh)
        x = x - hh
        u = un
        v = vn
        xs[n] = x
        us[n] = u
        vs[n] = v
        n += 1
    return n
