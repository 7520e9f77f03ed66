"""The forcing family f(x): top hat, Gaussian, Lorentzian, hybrid and marginal-quartic.

All members are even, non-negative and normalised to f(0) = 1 (the top hat
takes the symmetric value 1/2 exactly at its jumps |x| = L; solvers never
rely on that value, but it keeps the profile symmetric under reflection).
The far-field decay class drives which solver strategies apply:
faster-than-quartic decay admits branch termination at positive forcing
amplitude, slower-than-quartic decay forces the square-root far-field
balance instead.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from scipy.integrate import quad

from .errors import ValidationError


class Kind(enum.Enum):
    TOP_HAT = "tophat"
    GAUSSIAN = "gaussian"
    LORENTZIAN = "lorentzian"
    HYBRID = "hybrid"
    MARGINAL_QUARTIC = "marginal"


class DecayClass(enum.Enum):
    FASTER_THAN_QUARTIC = "faster_than_quartic"
    SLOWER_THAN_QUARTIC = "slower_than_quartic"
    MARGINAL_QUARTIC = "marginal_quartic"
    COMPACT_SUPPORT = "compact_support"


#: Default top-hat half-width.  The unit-full-width hat (L = 1/2) is the
#: normalisation for which the critical amplitudes take the reference value
#: 48 n^4 K^4(1/sqrt 2) ~ 567 n^4; see tophat.critical_alpha for the 1/L^4
#: rescaling to other widths.
DEFAULT_TOPHAT_HALFWIDTH = 0.5


@dataclass(frozen=True)
class ForcingProfile:
    """An even, decaying forcing, normalised to f(0) = 1.

    Immutable; instances are safe to share across worker threads.
    ``param`` is the half-width L for the top hat and the mix parameter
    a in [0, 1] for the hybrid (a = 0 is the Gaussian, a = 1 the
    Lorentzian); unused otherwise.
    """

    kind: Kind
    param: float = 0.0
    label: str = field(default="", compare=False)

    def __post_init__(self):
        if self.kind is Kind.TOP_HAT and self.param <= 0.0:
            raise ValidationError("top-hat half-width L must be positive")
        if self.kind is Kind.HYBRID and not 0.0 <= self.param <= 1.0:
            raise ValidationError("hybrid parameter a must lie in [0, 1]")
        if not self.label:
            object.__setattr__(self, "label", _default_label(self.kind, self.param))

    def __call__(self, x: float) -> float:
        return evaluate(self, x)


def _default_label(kind: Kind, param: float) -> str:
    if kind is Kind.TOP_HAT:
        return f"tophat:L={param:g}"
    if kind is Kind.HYBRID:
        return f"hybrid:a={param:g}"
    return kind.value


def top_hat(L: float = DEFAULT_TOPHAT_HALFWIDTH) -> ForcingProfile:
    return ForcingProfile(Kind.TOP_HAT, L)


def gaussian() -> ForcingProfile:
    return ForcingProfile(Kind.GAUSSIAN)


def lorentzian() -> ForcingProfile:
    return ForcingProfile(Kind.LORENTZIAN)


def hybrid(a: float) -> ForcingProfile:
    return ForcingProfile(Kind.HYBRID, a)


def marginal_quartic() -> ForcingProfile:
    return ForcingProfile(Kind.MARGINAL_QUARTIC)


def evaluate(f: ForcingProfile, x: float) -> float:
    """f(x) by the closed form of the kind."""
    if f.kind is Kind.TOP_HAT:
        ax = abs(x)
        if ax < f.param:
            return 1.0
        if ax > f.param:
            return 0.0
        return 0.5
    x2 = x * x
    if f.kind is Kind.GAUSSIAN:
        return math.exp(-x2)
    if f.kind is Kind.LORENTZIAN:
        return 1.0 / (1.0 + x2)
    if f.kind is Kind.HYBRID:
        a = f.param
        return math.exp(-(1.0 - a) * x2) / (1.0 + a * x2)
    return 1.0 / (1.0 + x2 * x2)


def lorentzian_complex(z: complex) -> complex:
    """Complex-plane evaluator 1/(1 + z^2), exposed for the Stokes machinery.

    Only the Lorentzian needs analytic continuation; the poles sit at
    z = +-i.
    """
    return 1.0 / (1.0 + z * z)


def second_derivative_at_zero(f: ForcingProfile) -> float:
    """f''(0).  The glueing construction additionally requires f''(0) < 0,
    which holds for every smooth kind except the marginal quartic."""
    if f.kind is Kind.TOP_HAT:
        raise ValidationError("top hat is not twice differentiable at x = 0")
    if f.kind is Kind.MARGINAL_QUARTIC:
        return 0.0
    # exp(-(1-a)x^2)/(1+a x^2) = 1 - x^2 + O(x^4) for every a in [0, 1]
    return -2.0


_mass_cache: dict[tuple[Kind, float], float] = {}


def mass(f: ForcingProfile) -> float:
    """Total mass M = 2 * int_0^inf f(x) dx.

    Closed forms where they exist; the hybrid with 0 < a < 1 falls back to
    adaptive quadrature at relative tolerance 1e-10 (cached per profile).
    """
    if f.kind is Kind.TOP_HAT:
        return 2.0 * f.param
    if f.kind is Kind.GAUSSIAN:
        return math.sqrt(math.pi)
    if f.kind is Kind.LORENTZIAN:
        return math.pi
    if f.kind is Kind.MARGINAL_QUARTIC:
        return math.pi / math.sqrt(2.0)
    a = f.param
    if a == 0.0:
        return math.sqrt(math.pi)
    if a == 1.0:
        return math.pi
    key = (f.kind, a)
    if key not in _mass_cache:
        val, err = quad(lambda x: evaluate(f, x), 0.0, math.inf,
                        epsabs=0.0, epsrel=1e-10, limit=200)
        if err > 1e-8 * abs(val):
            raise ValidationError(
                f"hybrid mass quadrature did not converge: estimate {val}, error {err}")
        _mass_cache[key] = 2.0 * val
    return _mass_cache[key]


def decay_class(f: ForcingProfile) -> DecayClass:
    """Far-field decay class relative to the 1/x^4 threshold."""
    if f.kind is Kind.TOP_HAT:
        return DecayClass.COMPACT_SUPPORT
    if f.kind is Kind.GAUSSIAN:
        return DecayClass.FASTER_THAN_QUARTIC
    if f.kind is Kind.LORENTZIAN:
        return DecayClass.SLOWER_THAN_QUARTIC
    if f.kind is Kind.MARGINAL_QUARTIC:
        return DecayClass.MARGINAL_QUARTIC
    return (DecayClass.SLOWER_THAN_QUARTIC if f.param == 1.0
            else DecayClass.FASTER_THAN_QUARTIC)


_TOKEN_HELP = ("valid forcing tokens: 'tophat:L=<halfwidth>' (or bare 'tophat'), "
               "'gaussian', 'lorentzian', 'hybrid:a=<mix in [0,1]>', 'marginal'")


def parse_forcing_token(token: str) -> ForcingProfile:
    """Parse a CLI forcing token such as ``gaussian`` or ``hybrid:a=0.7``."""
    name, _, argpart = token.strip().lower().partition(":")
    args: dict[str, float] = {}
    if argpart:
        for piece in argpart.split(","):
            key, eq, val = piece.partition("=")
            if not eq:
                raise ValidationError(f"malformed forcing token {token!r}; {_TOKEN_HELP}")
            try:
                args[key.strip()] = float(val)
            except ValueError:
                raise ValidationError(
                    f"non-numeric parameter in forcing token {token!r}; {_TOKEN_HELP}") from None
    try:
        if name == "tophat":
            return top_hat(args.pop("l", DEFAULT_TOPHAT_HALFWIDTH)) if not args or "l" in args \
                else _reject(token)
        if name == "gaussian":
            return gaussian() if not args else _reject(token)
        if name == "lorentzian":
            return lorentzian() if not args else _reject(token)
        if name == "hybrid":
            if set(args) != {"a"}:
                _reject(token)
            return hybrid(args["a"])
        if name == "marginal":
            return marginal_quartic() if not args else _reject(token)
    except ValidationError:
        raise
    raise ValidationError(f"unknown forcing {name!r}; {_TOKEN_HELP}")


def _reject(token: str):
    raise ValidationError(f"unexpected parameters in forcing token {token!r}; {_TOKEN_HELP}")
