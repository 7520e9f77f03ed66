"""Singulant field, Stokes lines and the exponentially small remainder.

Late terms of the large-amplitude Lorentzian series behave like
A Gamma(2n + gamma + 1) / sigma^{2n + gamma + 1} with the singulant

    sigma(z) = -sqrt(2) int_i^z (1 + p^2)^{-1/4} dp     (m = -1),
    sigma(z) = i sqrt(2) int_i^z (1 + p^2)^{-1/4} dp    (m = +1),

anchored so sigma(i) = 0 and cut along the imaginary axis above i and
below -i.  On that doubly cut plane the quarter power is single valued
once the factor arguments are windowed as

    arg(p - i) in [-3pi/2, pi/2),      arg(p + i) in [-pi/2, 3pi/2),

which reproduces the local form sigma ~ (2^{9/4}/3) i^{7/4} (z - i)^{3/4}
(m = -1) at the base point; the base-point quarter-power singularity is
removed exactly by the substitution p = i + s^4 (z1 - i).

Stokes lines are the curves Im sigma = 0: two leave z = i at angles
pi/6 and -7 pi/6 for m = -1, approaching the parabola
y = rho |x|^{1/2} with rho = sqrt(2/pi) Gamma(3/4)^2 ~ 1.198 far out;
for m = +1 a single admissible line runs down the imaginary axis and
crosses the real axis at the origin, where the remainder

    R_N(x) ~ 2^{3/4} pi Lambda mu^{-5/12} e^{-rho (2/mu)^{1/2}}
             (1 + x^2)^{1/8} cos psi(x),
    psi(x) = (2/mu)^{1/2} int_0^x (1 + p^2)^{-1/4} dp,

switches on (mu = a^{-1/2}).  The Stokes multiplier has the closed form
Lambda = 2^{7/6} pi^{1/2} / (3^{2/3} Gamma(1/3)) = 0.7140572...; the
closed form is positive (a widely quoted approximation of the same
constant carries a minus sign; only the magnitude enters |R_N|).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .errors import SolverError, ValidationError
from .specfun import gamma_fn

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(40)

#: argument windows fixing the branch on the doubly cut plane
ARG_WINDOW_MINUS = (-1.5 * math.pi, 0.5 * math.pi)   # for arg(z - i)
ARG_WINDOW_PLUS = (-0.5 * math.pi, 1.5 * math.pi)    # for arg(z + i)


def stokes_multiplier() -> float:
    """Closed-form Stokes multiplier 2^{7/6} sqrt(pi) / (3^{2/3} Gamma(1/3))."""
    return 2.0 ** (7.0 / 6.0) * math.sqrt(math.pi) / (
        3.0 ** (2.0 / 3.0) * gamma_fn(1.0 / 3.0))


def far_field_rho() -> float:
    """Parabola coefficient rho = sqrt(2/pi) Gamma(3/4)^2 of the far-field
    Stokes-line law y ~ rho |x|^{1/2}."""
    return math.sqrt(2.0 / math.pi) * gamma_fn(0.75) ** 2


def _windowed(theta: float, window: tuple[float, float]) -> float:
    lo, hi = window
    while theta >= hi:
        theta -= 2.0 * math.pi
    while theta < lo:
        theta += 2.0 * math.pi
    return theta


def quarter_power_factor(p: complex) -> complex:
    """(1 + p^2)^{-1/4} on the doubly cut plane (single valued)."""
    t1 = _windowed(cmath.phase(p - 1j), ARG_WINDOW_MINUS)
    t2 = _windowed(cmath.phase(p + 1j), ARG_WINDOW_PLUS)
    r = (abs(p - 1j) * abs(p + 1j)) ** -0.25
    return r * cmath.exp(-0.25j * (t1 + t2))


def _prefactor(m: int) -> complex:
    if m == -1:
        return complex(-math.sqrt(2.0))
    if m == +1:
        return 1j * math.sqrt(2.0)
    raise ValidationError("m must be +1 or -1")


def _check_cut(a: complex, b: complex) -> None:
    # reject segments crossing or running along Re z = 0, |Im z| > 1
    if a.real == 0.0 and b.real == 0.0:
        if max(abs(a.imag), abs(b.imag)) > 1.0 and not (a == 1j or b == 1j):
            raise ValidationError("path runs along a branch cut")
        return
    if a.real * b.real < 0.0:
        t = -a.real / (b.real - a.real)
        y_cross = a.imag + t * (b.imag - a.imag)
        if abs(y_cross) > 1.0:
            raise ValidationError("path crosses a branch cut")


def _segment_integral(p_from: complex, p_to: complex) -> complex:
    """Gauss-Legendre integral of the quarter-power factor over one
    straight segment, with panels short relative to the distance to the
    nearer branch point."""
    length = abs(p_to - p_from)
    if length == 0.0:
        return 0.0j
    dist = min(abs(p_from - 1j), abs(p_from + 1j),
               abs(p_to - 1j), abs(p_to + 1j))
    n_panels = max(1, int(math.ceil(length / max(0.03, 0.8 * dist))))
    total = 0.0 + 0.0j
    for k in range(n_panels):
        a = p_from + (p_to - p_from) * k / n_panels
        b = p_from + (p_to - p_from) * (k + 1) / n_panels
        mid = 0.5 * (a + b)
        half = 0.5 * (b - a)
        acc = 0.0 + 0.0j
        for t, w in zip(_GL_NODES, _GL_WEIGHTS):
            acc += w * quarter_power_factor(mid + half * t)
        total += acc * half
    return total


def _base_leg(z1: complex) -> complex:
    """Integral of the quarter-power factor over [i, z1]: the substitution
    p = i + s^4 (z1 - i) removes the (p - i)^{-1/4} singularity exactly and
    leaves an integrand analytic in s."""
    d = z1 - 1j
    if d == 0.0:
        return 0.0j
    theta1 = _windowed(cmath.phase(d), ARG_WINDOW_MINUS)
    scale = abs(d) ** -0.25
    acc = 0.0 + 0.0j
    for t, w in zip(_GL_NODES, _GL_WEIGHTS):
        s = 0.5 * (t + 1.0)
        p = 1j + s ** 4 * d
        t2 = _windowed(cmath.phase(p + 1j), ARG_WINDOW_PLUS)
        f = scale * abs(p + 1j) ** -0.25 * cmath.exp(-0.25j * (theta1 + t2))
        acc += w * 0.5 * f * 4.0 * s * s * d
    return acc


def singulant(m: int, z: complex, path: list[complex] | None = None) -> complex:
    """sigma(z), integrated from the base point i along ``path`` (optional
    intermediate waypoints; default the straight segment).  Paths crossing
    the cut strips {Re p = 0, |Im p| > 1} are rejected.  Path independent
    within the cut plane to quadrature accuracy."""
    pref = _prefactor(m)
    if z == 1j:
        return 0.0 + 0.0j
    waypoints = [z] if path is None else list(path) + [z]
    for a, b in zip([1j] + waypoints[:-1], waypoints):
        _check_cut(a, b)
    total = _base_leg(waypoints[0])
    for a, b in zip(waypoints[:-1], waypoints[1:]):
        total += _segment_integral(a, b)
    return pref * total


def singulant_derivative(m: int, z: complex) -> complex:
    """sigma'(z) = prefactor * (1 + z^2)^{-1/4}; satisfies
    (sigma')^2 = -2 W_0(z) with W_0 = m (1 + z^2)^{-1/2}."""
    return _prefactor(m) * quarter_power_factor(z)


@dataclass
class StokesLine:
    """A traced Im sigma = 0 curve."""

    origin: complex
    exit_angle: float
    points: np.ndarray  # complex polyline
    sigma: np.ndarray   # singulant values along it
    m: int


@dataclass
class Singulant:
    """Handle on the singulant field for one sign choice."""

    m: int
    branch_cut: str = ("imaginary axis above +i and below -i; "
                       "arg(z - i) in [-3pi/2, pi/2), arg(z + i) in [-pi/2, 3pi/2)")

    def __call__(self, z: complex, path: list[complex] | None = None) -> complex:
        return singulant(self.m, z, path)


def exit_angles(m: int) -> tuple[float, ...]:
    """Local exit angles of the Stokes lines at z = i within the
    admissible window: Im[i^{7/4 or 11/4} (z-i)^{3/4}] = 0."""
    base = 7.0 if m == -1 else 11.0
    lo, hi = ARG_WINDOW_MINUS
    out = []
    for k in range(-2, 4):
        psi = -base * math.pi / 6.0 + 4.0 * k * math.pi / 3.0
        if lo <= psi < hi:
            out.append(psi)
    return tuple(sorted(out))


def trace_stokes_lines(m: int, arclength_max: float = 150.0,
                       step: float = 1e-2) -> list[StokesLine]:
    """Predictor-corrector tracing of Im sigma = 0 from z = i.

    The predictor follows the direction that keeps d(sigma) real, the
    corrector is a transverse Newton iteration on Im sigma.  Mirror lines
    from z = -i are complex conjugates by symmetry and are not traced
    separately.
    """
    lines = []
    for psi0 in exit_angles(m):
        r0 = 1e-4
        z = 1j + r0 * cmath.exp(1j * psi0)
        sig = _prefactor(m) * _base_leg(z)
        pts = [1j, z]
        sigs = [0.0j, sig]
        heading = cmath.exp(1j * psi0)
        s_total = r0
        pref = _prefactor(m)
        while s_total < arclength_max:
            zc = pts[-1]
            sp = singulant_derivative(m, zc)
            d = 1.0 / sp
            d /= abs(d)
            if (d.real * heading.real + d.imag * heading.imag) < 0.0:
                d = -d
            h = step if s_total < 1.0 else min(0.05 + 0.1 * s_total, 2.0)
            if m == +1:
                h = min(step, max(zc.imag + 0.999, 1e-4))
            z_new = zc + h * d
            sig_new = sig + pref * _segment_integral(zc, z_new)
            for _ in range(4):
                sp_new = singulant_derivative(m, z_new)
                n_dir = 1j * d
                denom = (sp_new * n_dir).imag
                if denom == 0.0:
                    break
                t_corr = -sig_new.imag / denom
                if abs(t_corr) < 1e-13 * max(1.0, abs(z_new)):
                    break
                t_corr = max(-0.5 * h, min(0.5 * h, t_corr))
                z_next = z_new + t_corr * n_dir
                sig_new = sig_new + pref * _segment_integral(z_new, z_next)
                z_new = z_next
            if abs(sig_new.imag) > 1e-6 * max(1.0, abs(sig_new.real)):
                raise SolverError(
                    f"Stokes corrector diverged near z = {z_new:.4f} "
                    f"(Im sigma = {sig_new.imag:.3e})")
            heading = d
            s_total += h
            sig = sig_new
            pts.append(z_new)
            sigs.append(sig_new)
            if m == +1 and z_new.imag <= -0.999:
                break
            if abs(z_new.real) > 130.0 or abs(z_new.imag) > 60.0:
                break
        lines.append(StokesLine(origin=1j, exit_angle=psi0,
                                points=np.array(pts), sigma=np.array(sigs), m=m))
    return lines


def fit_far_field_rho(line: StokesLine, x_window: tuple[float, float] = (20.0, 100.0)
                      ) -> float:
    """Least-squares coefficient of y = rho |x|^{1/2} over the window."""
    z = line.points
    xs = np.abs(z.real)
    ys = z.imag
    mask = (xs >= x_window[0]) & (xs <= x_window[1])
    if not np.any(mask):
        raise ValidationError("traced line does not reach the fit window")
    w = np.sqrt(xs[mask])
    return float(np.sum(w * ys[mask]) / np.sum(w * w))


def psi_phase(alpha: float, x: float) -> float:
    """psi(x) = (2/mu)^{1/2} int_0^x (1 + p^2)^{-1/4} dp (real quadrature)."""
    val, _ = quad(lambda p: (1.0 + p * p) ** -0.25, 0.0, abs(x),
                  epsabs=1e-13, epsrel=1e-12, limit=200)
    mu = alpha ** -0.5
    return math.sqrt(2.0 / mu) * val * math.copysign(1.0, x)


def remainder_envelope(alpha: float, x: float) -> float:
    """|R_N| envelope (W units, no oscillatory factor)."""
    if alpha < 100.0:
        raise ValidationError("remainder estimate requires alpha >= 100")
    mu = alpha ** -0.5
    rho = far_field_rho()
    return (2.0 ** 0.75 * math.pi * stokes_multiplier() * mu ** (-5.0 / 12.0)
            * math.exp(-rho * math.sqrt(2.0 / mu)) * (1.0 + x * x) ** 0.125)


def remainder_estimate(alpha: float, x: float, n_opt: int | None = None) -> float:
    """Exponentially small remainder switched on at x = 0 for m = +1
    (W units; multiply by sqrt(alpha) for u units).

    Independent of the truncation-order argument (kept for signature
    compatibility): the estimate applies at optimal truncation.  The
    algebraic (1 + x^2)^{1/8} envelope grows with x, so far enough out the
    switched-on term always overwhelms the algebraic series.
    """
    return remainder_envelope(alpha, x) * math.cos(psi_phase(alpha, x))
