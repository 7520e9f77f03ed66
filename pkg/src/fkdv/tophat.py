"""Exact piecewise solutions for the top-hat forcing.

Everything is built in the rescaled variables U = u / sqrt(a), y =
a^{1/4} x, in which the problem inside the hat support is U'' + U^2 = 1
(phase plane Sigma_2) and outside it U'' + U^2 = 0 (Sigma_1).  A solution
follows the Sigma_1 unstable manifold (energy (1/2)U'^2 + (1/3)U^3 = 0) up
to the junction at y = -a^{1/4}L, runs along a Sigma_2 orbit of energy

    (1/2) U'^2 + (1/3) U^3 - U = c,      0 < c < 2/3,

and exits symmetrically onto the stable manifold.  The junction value is
U = -c exactly, the orbit between the cubic turning points r2 < r3 is a
Jacobi cn^2 profile, and the half-width condition becomes a scalar
root-solve in c for the orbit's time of flight.  Branch B_n executes n
full orbit cycles plus the junction arcs; at c = 0 the orbit degenerates
to the critical profile sqrt(3a) cn^2((a/3)^{1/4} x; k = 1/sqrt 2) that
enters and leaves the support at the phase-plane origin, which fixes the
critical amplitudes

    a*_n(L) = 3 n^4 K^4(1/sqrt 2) / L^4.

The default half-width L = 1/2 (unit full width) makes this the reference
value 48 n^4 K^4 ~ 567 n^4.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import SolverError, ValidationError
from .forcings import DEFAULT_TOPHAT_HALFWIDTH
from .specfun import elliptic_K, jacobi_cn

K_HALF = 1.0 / math.sqrt(2.0)  # modulus of the critical cn^2 profile


class Plane(enum.Enum):
    SIGMA1 = "sigma1"
    SIGMA2 = "sigma2"


@dataclass(frozen=True)
class PhasePlanePiece:
    """One phase-plane arc of the assembled solution.

    ``energy_c`` is the Sigma_2 orbit constant (0 for the Sigma_1
    manifolds); the invariants hold in the rescaled (U, y) variables.
    ``x_span`` is in physical x.
    """

    plane: Plane
    energy_c: float
    x_span: tuple[float, float]


@dataclass
class ExactTopHatSolution:
    alpha: float
    branch_n: int
    L: float
    energy_c: float
    pieces: tuple[PhasePlanePiece, ...]
    u0: float

    def __call__(self, x):
        return evaluate_solution(self, x)


@lru_cache(maxsize=1)
def _verify_cn_convention() -> bool:
    # defensive check of the modulus convention: sqrt(3) cn^2(y/3^{1/4}; k)
    # with k = 1/sqrt(2) must satisfy U'' + U^2 = 1 pointwise
    lam = 3.0 ** -0.25
    h = 1e-4
    for y in (0.3, 1.0, 2.0):
        up = math.sqrt(3.0) * jacobi_cn((y + h) * lam, K_HALF) ** 2
        u0 = math.sqrt(3.0) * jacobi_cn(y * lam, K_HALF) ** 2
        um = math.sqrt(3.0) * jacobi_cn((y - h) * lam, K_HALF) ** 2
        resid = (up - 2.0 * u0 + um) / (h * h) + u0 * u0 - 1.0
        if abs(resid) > 1e-5:
            raise SolverError(
                "cn modulus convention check failed; expected k = 1/sqrt(2)")
    return True


def critical_alpha(n: int, L: float = DEFAULT_TOPHAT_HALFWIDTH) -> float:
    """Critical amplitude a*_n below which branch B_n does not exist.

    Equals 48 n^4 K^4(1/sqrt 2) at the default half-width L = 1/2 and
    scales as 1/L^4.
    """
    if n < 1:
        raise ValidationError("critical_alpha requires n >= 1")
    if L <= 0.0:
        raise ValidationError("half-width L must be positive")
    K = elliptic_K(K_HALF)
    return 3.0 * (n * K) ** 4 / L ** 4


def critical_profile(n: int, x, L: float = DEFAULT_TOPHAT_HALFWIDTH):
    """The degenerate-orbit profile at a = a*_n: u(+-L) = u'(+-L) = 0 with
    n interior maxima; identically zero outside the support."""
    if n < 1:
        raise ValidationError("critical_profile requires n >= 1")
    _verify_cn_convention()
    alpha = critical_alpha(n, L)
    amp = math.sqrt(3.0 * alpha)
    lam = (alpha / 3.0) ** 0.25
    Kq = elliptic_K(K_HALF)
    shift = 0.0 if n % 2 == 1 else Kq
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.zeros_like(xs)
    inside = np.abs(xs) <= L
    for i in np.flatnonzero(inside):
        out[i] = amp * jacobi_cn(lam * xs[i] - shift, K_HALF) ** 2
    return out if np.ndim(x) else float(out[0])


def _orbit_roots(c: float) -> tuple[float, float, float]:
    """Roots r1 < r2 < r3 of U^3 - 3U - 3c = 0 (turning points of the
    Sigma_2 orbit with energy c, |c| < 2/3)."""
    phi = math.acos(max(-1.0, min(1.0, 1.5 * c)))
    r3 = 2.0 * math.cos(phi / 3.0)
    r2 = 2.0 * math.cos(phi / 3.0 - 2.0 * math.pi / 3.0)
    r1 = 2.0 * math.cos(phi / 3.0 + 2.0 * math.pi / 3.0)
    return r1, r2, r3


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(80)


def _junction_time(c: float) -> float:
    """Time of flight along the Sigma_2 orbit from the turning point r2 to
    the junction U = -c (the overshoot arc).

    The integrable 1/sqrt turning-point singularity is removed by the
    substitution U = r2 + t^2.
    """
    r1, r2, r3 = _orbit_roots(c)
    t_max = math.sqrt(max(-c - r2, 0.0))  # r2 <= -c, equality at c = 0 up to roundoff
    nodes = 0.5 * t_max * (_GL_NODES + 1.0)
    w = 0.5 * t_max * _GL_WEIGHTS
    U = r2 + nodes * nodes
    g = np.sqrt((2.0 / 3.0) * (r3 - U) * (U - r1))
    return float(np.sum(w * 2.0 / g))


def _orbit_period(c: float) -> float:
    """Full period of the Sigma_2 orbit: 2 K(k)/lambda in closed form."""
    r1, r2, r3 = _orbit_roots(c)
    lam = math.sqrt((r3 - r1) / 6.0)
    k = math.sqrt((r3 - r2) / (r3 - r1))
    return 2.0 * elliptic_K(k) / lam


def _flight(n: int, c: float) -> float:
    return n * _orbit_period(c) + 2.0 * _junction_time(c)


_C_EPS = 1e-13


def _solve_energy(n: int, target: float) -> float:
    """Solve flight(n, c) = target for the orbit energy c in (0, 2/3)."""
    c_lo, c_hi = _C_EPS, 2.0 / 3.0 - _C_EPS
    # flight is monotone increasing in c; scan to bracket, then bisect
    grid = np.linspace(c_lo, c_hi, 200)
    vals = [_flight(n, c) - target for c in grid]
    if vals[0] > 0.0:
        raise SolverError(
            f"branch B_{n} does not exist at this amplitude "
            f"(minimal half-width flight {vals[0] + target:.6g} exceeds {target:.6g})")
    if vals[-1] < 0.0:
        raise SolverError(
            "orbit energy at the homoclinic limit; amplitude too large for "
            "double-precision energy resolution")
    i = int(np.flatnonzero(np.diff(np.sign(vals)))[0])
    lo, hi = float(grid[i]), float(grid[i + 1])
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if _flight(n, mid) - target > 0.0:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def solve_exact(alpha: float, branch_n: int,
                L: float = DEFAULT_TOPHAT_HALFWIDTH) -> ExactTopHatSolution:
    """Assemble the exact branch-B_n solution at amplitude ``alpha``.

    Requires alpha > 0 for B_0 and alpha > a*_n for B_n, n >= 1; otherwise
    reports that the branch does not exist.
    """
    if branch_n < 0:
        raise ValidationError("branch_n must be >= 0")
    if L <= 0.0:
        raise ValidationError("half-width L must be positive")
    if alpha <= 0.0:
        raise ValidationError("solve_exact requires alpha > 0")
    _verify_cn_convention()
    target = 2.0 * alpha ** 0.25 * L
    c = _solve_energy(branch_n, target)
    r1, r2, r3 = _orbit_roots(c)
    center = r3 if branch_n % 2 == 1 else r2
    u0 = math.sqrt(alpha) * center
    pieces = (
        PhasePlanePiece(Plane.SIGMA1, 0.0, (-math.inf, -L)),
        PhasePlanePiece(Plane.SIGMA2, c, (-L, L)),
        PhasePlanePiece(Plane.SIGMA1, 0.0, (L, math.inf)),
    )
    return ExactTopHatSolution(alpha=alpha, branch_n=branch_n, L=L,
                               energy_c=c, pieces=pieces, u0=u0)


def evaluate_solution(sol: ExactTopHatSolution, x):
    """u(x) for an assembled solution (even in x)."""
    alpha, c, L = sol.alpha, sol.energy_c, sol.L
    r1, r2, r3 = _orbit_roots(c)
    lam = math.sqrt((r3 - r1) / 6.0)
    k = math.sqrt((r3 - r2) / (r3 - r1))
    shift = 0.0 if sol.branch_n % 2 == 1 else elliptic_K(k)
    scale = alpha ** 0.25
    y_L = scale * L
    d = math.sqrt(6.0 / c) - y_L
    root_a = math.sqrt(alpha)

    def one(xx: float) -> float:
        y = scale * abs(xx)
        if y <= y_L:
            cn = jacobi_cn(lam * y - shift, k)
            return root_a * (r2 + (r3 - r2) * cn * cn)
        return root_a * (-6.0 / (y + d) ** 2)

    xs = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.array([one(xx) for xx in xs])
    return out if np.ndim(x) else float(out[0])


def orbit_energy_residual(sol: ExactTopHatSolution, x: float) -> float:
    """Energy-invariant residual of the piece containing x (rescaled
    variables): Sigma_2 arcs conserve (1/2)U'^2 + (1/3)U^3 - U = c,
    Sigma_1 arcs conserve (1/2)U'^2 + (1/3)U^3 = 0."""
    scale = sol.alpha ** 0.25
    h = 1e-6 / scale
    um, u0, up = (evaluate_solution(sol, xx) / math.sqrt(sol.alpha)
                  for xx in (x - h, x, x + h))
    du_dy = (up - um) / (2.0 * h * scale)
    e = 0.5 * du_dy ** 2 + u0 ** 3 / 3.0
    if abs(x) < sol.L:
        return e - u0 - sol.energy_c
    return e
