"""Far-field exponents for the marginal forcing 1/(1 + x^4).

With u ~ phi(log x) / x^2 all three terms of the equation balance at
infinity; the autonomous problem for phi has fixed points
phi_+- = -3 +- sqrt(9 + a).  Perturbations decay/grow like x^{-p} with

    p_+- = (1/2)(-5 +- sqrt(25 - 8 sqrt(9 + a)))    near phi_+,
    l_+- = (1/2)(-5 +- sqrt(25 + 8 sqrt(9 + a)))    near phi_-.

For 8 sqrt(9 + a) > 25 the p exponents form a complex pair
-5/2 +- i tau/2 with tau = sqrt(8 sqrt(9 + a) - 25): branch termination
becomes an inward spiral whose parameter-space contraction per full turn
is exp(-5 pi / tau) (per half turn, its square root).  The discriminant
vanishes exactly at a = 49/64.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from ..errors import ValidationError


@dataclass(frozen=True)
class MarginalExponents:
    alpha: float
    phi_plus: float
    phi_minus: float
    p_plus: complex
    p_minus: complex
    lambda_plus: float
    lambda_minus: float
    tau: float | None
    spiral_factor: float | None

    @property
    def spiral_half_turn_factor(self) -> float | None:
        return None if self.spiral_factor is None else math.sqrt(self.spiral_factor)


def marginal_exponents(alpha: float) -> MarginalExponents:
    if alpha <= 0.0:
        raise ValidationError("marginal exponents require alpha > 0")
    s = math.sqrt(9.0 + alpha)
    disc = 25.0 - 8.0 * s
    root = cmath.sqrt(disc)
    p_plus = 0.5 * (-5.0 + root)
    p_minus = 0.5 * (-5.0 - root)
    lam_root = math.sqrt(25.0 + 8.0 * s)
    tau = math.sqrt(-disc) if disc < 0.0 else None
    spiral = math.exp(-5.0 * math.pi / tau) if tau else None
    return MarginalExponents(
        alpha=alpha,
        phi_plus=-3.0 + s,
        phi_minus=-3.0 - s,
        p_plus=p_plus,
        p_minus=p_minus,
        lambda_plus=0.5 * (-5.0 + lam_root),
        lambda_minus=0.5 * (-5.0 - lam_root),
        tau=tau,
        spiral_factor=spiral,
    )
