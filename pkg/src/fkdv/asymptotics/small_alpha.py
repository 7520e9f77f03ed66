"""Small-amplitude laws for branch B_0 and the finite-amplitude
termination outer profile.

For a -> 0+ the solution is O(a^{2/3}) at the origin and lives on the
outer scale x = a^{-1/3} X, where it follows V = -6/(X_0 + |X|)^2 with
X_0 = 2 (3/M)^{1/3} set by the forcing mass M; the matched amplitude is
u(0) ~ -(3^{1/3} M^{2/3} / 2) a^{2/3}.  (For the Gaussian the next-order
correction + a/2 is known and included.)  The limit profile has a corner
whose slope jump equals M exactly: 2 * 12 / X_0^3 = M.

Near a finite termination amplitude the same outer equation holds on
x = eps^{-1/2} X with u = eps v_0, and the decaying profile is
v_0 = -6/(|X| + (6/|kappa|)^{1/2})^2, whose corner carries the slope jump
2 sqrt(2/3) |kappa|^{3/2} -- set by the inner constant kappa, not by the
mass.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..errors import ValidationError
from ..forcings import ForcingProfile, Kind, mass


@dataclass(frozen=True)
class SmallAlphaModel:
    """Coefficients of the a -> 0 description of branch B_0."""

    M: float
    X0: float
    c1: float  # u(0) ~ c1 * a^{2/3}
    c2: float  # forcing-specific next-order coefficient of a

    def u0(self, alpha: float) -> float:
        return self.c1 * alpha ** (2.0 / 3.0) + self.c2 * alpha


def small_alpha_model(f: ForcingProfile) -> SmallAlphaModel:
    M = mass(f)
    X0 = 2.0 * (3.0 / M) ** (1.0 / 3.0)
    c1 = -(3.0 ** (1.0 / 3.0) * M ** (2.0 / 3.0)) / 2.0
    c2 = 0.5 if f.kind is Kind.GAUSSIAN else 0.0
    return SmallAlphaModel(M=M, X0=X0, c1=c1, c2=c2)


def small_alpha_u0(f: ForcingProfile, alpha: float) -> float:
    """Leading small-amplitude u(0), plus the + a/2 correction for the
    Gaussian."""
    if alpha <= 0.0:
        raise ValidationError("small_alpha_u0 requires alpha > 0")
    return small_alpha_model(f).u0(alpha)


def small_alpha_outer_profile(f: ForcingProfile, alpha: float, X: float) -> float:
    """Outer profile V(X) (u = a^{2/3} V, x = a^{-1/3} X)."""
    if alpha <= 0.0:
        raise ValidationError("outer profile requires alpha > 0")
    X0 = small_alpha_model(f).X0
    return -6.0 / (X0 + abs(X)) ** 2


def termination_outer_profile(kappa: float, X: float) -> float:
    """Outer profile v_0(X) at a finite termination point."""
    if kappa == 0.0:
        raise ValidationError("kappa = 0 degenerates the outer problem")
    return -6.0 / (abs(X) + math.sqrt(6.0 / abs(kappa))) ** 2


def termination_slope_jump(kappa: float) -> float:
    """Corner slope jump [dv_0/dX] at X = 0."""
    if kappa == 0.0:
        raise ValidationError("kappa = 0 degenerates the outer problem")
    return 2.0 * math.sqrt(2.0 / 3.0) * abs(kappa) ** 1.5
