"""Special functions of the homoclinic-glueing layer.

The linearisation about the homoclinic pulse U0H(y) = 3 sech^2(y/sqrt 2) - 1
is solved by the antisymmetric / symmetric pair

    Phi_a(y) = tanh y sech^2 y,
    Phi_s(y) = (1/8)(15 sech^2 y - 2 cosh^2 y - 5 - 15 y Phi_a(y)),

(arguments y/sqrt 2 in the pulse variable), with particular integrals
Phi_p^{(k)} for polynomial right-hand sides y^k, k = 0, 1, 2.  Phi_p^{(2)}
involves I(y) = 4 int_0^y s^2 Phi_s(s) ds, which has no elementary
antiderivative; it is computed once on a Chebyshev grid (in the scaled
form I(y) e^{-2y}, which stays O(1)) and interpolated, keeping profile
sweeps cheap.  The glueing combinations

    phi(y) = -16 Phi_s(y/sqrt 2),
    psi_k(y) = D_a^{(k)} Phi_a(y/sqrt 2) + D_s^{(k)} Phi_s(y/sqrt 2)
               + Phi_p^{(k)}(y/sqrt 2)

are normalised so that phi ~ e^{-sqrt 2 y} as y -> -infinity and
psi_k ~ -(1/2) y^k (k = 0, 1), psi_2 ~ -(1/2)(y^2 + 1), with the growing
exponential of psi_1 carrying exactly the sqrt(2)/8 ladder constant of
the pulse-spacing recursion.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np
from scipy.integrate import quad

from ..errors import ValidationError

SQRT2 = math.sqrt(2.0)

D_A = (-1.5, 107.0 * SQRT2 / 8.0, 5.0 * math.pi ** 2 / 16.0 - 19.0 / 32.0)
D_S = (1.0, -SQRT2, 4.0 * math.log(2.0))


def u0_homoclinic(y: float) -> float:
    """The pulse U0H(y) = 3 sech^2(y / sqrt 2) - 1."""
    return 3.0 / math.cosh(y / SQRT2) ** 2 - 1.0


def phi_a(y: float) -> float:
    t = math.tanh(y)
    return t / math.cosh(y) ** 2


def phi_s(y: float) -> float:
    sech2 = 1.0 / math.cosh(y) ** 2
    return 0.125 * (15.0 * sech2 - 2.0 * math.cosh(y) ** 2 - 5.0
                    - 15.0 * y * phi_a(y))


_I_CHEB_DOMAIN = (0.0, 16.0)
_I_CHEB_NODES = 220


@lru_cache(maxsize=1)
def _i_interpolant():
    """Chebyshev interpolant of I(y) e^{-2y} on [0, 16] (I is odd)."""
    lo, hi = _I_CHEB_DOMAIN
    k = np.arange(_I_CHEB_NODES)
    nodes = 0.5 * (lo + hi) + 0.5 * (hi - lo) * np.cos(np.pi * k / (_I_CHEB_NODES - 1))
    nodes = np.sort(nodes)
    integrand = lambda s: 4.0 * s * s * phi_s(s)
    vals = np.empty_like(nodes)
    acc = 0.0
    prev = 0.0
    for i, y in enumerate(nodes):
        seg, _ = quad(integrand, prev, y, epsabs=1e-13, epsrel=1e-12, limit=200)
        acc += seg
        prev = y
        vals[i] = acc * math.exp(-2.0 * y)
    coef = np.polynomial.chebyshev.chebfit(
        (2.0 * nodes - (lo + hi)) / (hi - lo), vals, _I_CHEB_NODES - 1)
    return coef


def glue_tail_integral(y: float) -> float:
    """I(y) = 4 int_0^y s^2 Phi_s(s) ds (odd in y)."""
    ay = abs(y)
    if ay > _I_CHEB_DOMAIN[1]:
        raise ValidationError(f"I(y) tabulated only for |y| <= {_I_CHEB_DOMAIN[1]}")
    lo, hi = _I_CHEB_DOMAIN
    val = np.polynomial.chebyshev.chebval(
        (2.0 * ay - (lo + hi)) / (hi - lo), _i_interpolant())
    return math.copysign(float(val) * math.exp(2.0 * ay), y)


def phi_p2(y: float) -> float:
    sech2 = 1.0 / math.cosh(y) ** 2
    bracket = y * (y * sech2 - 2.0 * math.tanh(y)) - math.log(sech2)
    return 2.0 * bracket * phi_s(y) + phi_a(y) * glue_tail_integral(y)


def phi_p1(y: float) -> float:
    return (SQRT2 / 8.0) * (math.sinh(2.0 * y) - 4.0 * y + 6.0 * math.tanh(y)
                            - (6.0 * y * y + 15.0) * phi_a(y)
                            + 12.0 * y / math.cosh(y) ** 2)


def phi_p0(y: float) -> float:
    t = math.tanh(y)
    sh2 = math.sinh(y) ** 2
    return (0.125 * (15.0 * t + 3.0 * y) * phi_a(y) - 0.25 * t * t
            - 0.125 * sh2 * (15.0 * t ** 4 - 25.0 * t * t + 8.0))


def phi_glue(y: float) -> float:
    """The pure-exponential complementary combination phi = -16 Phi_s."""
    return -16.0 * phi_s(y / SQRT2)


def psi_k(k: int, y: float) -> float:
    """The matched particular solutions psi_0, psi_1, psi_2."""
    if k not in (0, 1, 2):
        raise ValidationError("psi_k defined for k = 0, 1, 2")
    p = (phi_p0, phi_p1, phi_p2)[k]
    ys = y / SQRT2
    return D_A[k] * phi_a(ys) + D_S[k] * phi_s(ys) + p(ys)


GLUE_FUNCTIONS = {
    "phi_a": phi_a,
    "phi_s": phi_s,
    "phi_p0": phi_p0,
    "phi_p1": phi_p1,
    "phi_p2": phi_p2,
    "phi": phi_glue,
    "psi0": lambda y: psi_k(0, y),
    "psi1": lambda y: psi_k(1, y),
    "psi2": lambda y: psi_k(2, y),
    "u0_homoclinic": u0_homoclinic,
}


def glueing_functions_eval(name: str, y: float) -> float:
    """Dispatch by name; see GLUE_FUNCTIONS for the catalogue."""
    try:
        fn = GLUE_FUNCTIONS[name]
    except KeyError:
        raise ValidationError(
            f"unknown glueing function {name!r}; available: {sorted(GLUE_FUNCTIONS)}")
    return fn(y)


def tail_integral_identity_value() -> tuple[float, float]:
    """Quadrature check value of 4 int_0^inf s^2 (Phi_s + e^{2s}/16 + 3/4) ds
    against its closed form -(5 pi^2 + 1)/16.

    The integrand is evaluated in the algebraically identical form
    4 s^2 [(15/8) sech^2 s - e^{-2s}/16 - (15/8) s Phi_a(s)], in which the
    e^{2s} growth has cancelled exactly (no overflow, no cancellation
    error)."""

    def integrand(s: float) -> float:
        if s > 50.0:
            return 0.0  # integrand ~ -30 s^3 e^{-2s}, below 1e-38 here
        return 4.0 * s * s * (1.875 / math.cosh(s) ** 2
                              - math.exp(-2.0 * s) / 16.0
                              - 1.875 * s * phi_a(s))

    val, _ = quad(integrand, 0.0, math.inf, epsabs=1e-12, epsrel=1e-11, limit=400)
    return val, -(5.0 * math.pi ** 2 + 1.0) / 16.0
