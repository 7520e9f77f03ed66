"""Large-amplitude expansion for the Lorentzian forcing.

Writing u = sqrt(a) W(x) and mu = a^{-1/2}, the expansion W = sum mu^n W_n
has W_0 = m (1+x^2)^{-1/2} with sign m = +-1 and, for n >= 1,

    W_n = -(2 W_0)^{-1} ( sum_{k=1}^{n-1} W_k W_{n-k} + W_{n-1}'' ).

Every term has the shape W_n = m^{n+1} p_{2n}(x) (1+x^2)^{-(1+3n)/2} with
p_{2n} a degree-2n polynomial; the coefficients are generated in exact
rational arithmetic, which keeps the violently growing late terms free of
cancellation error.  Note the sign bookkeeping: the recurrence forces
W_1 to be sign-independent and W_2 to carry the sign of m, i.e.
W_2 = m (5/8)(4x^4 - 20x^2 + 3)(1+x^2)^{-7/2}; in particular W_2(0) is
negative on the decaying (m = -1) branch, consistent with evaluating the
series against the computed B_0 amplitudes.

The series is divergent (late terms grow like Gamma(2n + 5/6)); use
optimal truncation for function values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from ..errors import ValidationError

MAX_ORDER = 60


def _poly_mul(a: tuple[Fraction, ...], b: tuple[Fraction, ...]) -> list[Fraction]:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return out


def _poly_add(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    n = max(len(a), len(b))
    return [(a[i] if i < len(a) else Fraction(0)) +
            (b[i] if i < len(b) else Fraction(0)) for i in range(n)]


def _poly_scale(a, s: Fraction) -> list[Fraction]:
    return [s * c for c in a]


def _poly_diff(a) -> list[Fraction]:
    return [Fraction(i) * a[i] for i in range(1, len(a))] or [Fraction(0)]


_ONE_PLUS_X2 = (Fraction(1), Fraction(0), Fraction(1))


@dataclass(frozen=True)
class LorentzianSeries:
    """Exact numerator polynomials p_{2n} (ascending coefficients) and the
    leading sign m; W_n = m^{n+1} p_{2n}(x) (1+x^2)^{-(1+3n)/2}."""

    m: int
    coefficients: tuple[tuple[Fraction, ...], ...]

    @property
    def n_max(self) -> int:
        return len(self.coefficients) - 1


@lru_cache(maxsize=4)
def _numerators(n_max: int) -> tuple[tuple[Fraction, ...], ...]:
    ps: list[tuple[Fraction, ...]] = [(Fraction(1),)]
    for n in range(1, n_max + 1):
        p_prev = ps[n - 1]
        beta2 = 3 * n - 2  # twice the prefactor exponent of the previous term
        d1 = _poly_diff(p_prev)
        d2 = _poly_diff(d1)
        term = _poly_mul(_poly_mul(_ONE_PLUS_X2, _ONE_PLUS_X2), d2)
        xpoly = (Fraction(0), Fraction(1))
        term = _poly_add(term, _poly_scale(
            _poly_mul(xpoly, _poly_mul(_ONE_PLUS_X2, d1)), Fraction(-2 * beta2)))
        bracket = (Fraction(-beta2), Fraction(0), Fraction(-beta2 * (1 - 3 * n)))
        term = _poly_add(term, _poly_mul(bracket, p_prev))
        conv: list[Fraction] = [Fraction(0)]
        for k in range(1, n):
            conv = _poly_add(conv, _poly_mul(ps[k], ps[n - k]))
        total = _poly_add(conv, term)
        pn = _poly_scale(total, Fraction(-1, 2))
        pn = pn + [Fraction(0)] * (2 * n + 1 - len(pn))
        ps.append(tuple(pn[: 2 * n + 1]))
    return tuple(ps)


def lorentzian_series_coefficients(n_max: int, m: int = -1) -> LorentzianSeries:
    """Exact rational numerator polynomials up to order ``n_max`` (<= 60)."""
    if not 1 <= n_max <= MAX_ORDER:
        raise ValidationError(f"n_max must lie in [1, {MAX_ORDER}]")
    if m not in (+1, -1):
        raise ValidationError("m must be +1 or -1")
    return LorentzianSeries(m=m, coefficients=_numerators(n_max))


def series_term(series: LorentzianSeries, n: int, x: float) -> float:
    """W_n(x) as a float."""
    p = series.coefficients[n]
    val = 0.0
    for c in reversed(p):
        val = val * x + float(c)
    sign = 1.0 if (series.m == 1 or (n + 1) % 2 == 0) else -1.0
    return sign * val * (1.0 + x * x) ** (-(1 + 3 * n) / 2.0)


def lorentzian_series_eval(series: LorentzianSeries, alpha: float, x: float,
                           truncation: int | str = "optimal"
                           ) -> tuple[float, float]:
    """u(x) = sqrt(a) sum_{n<=N} mu^n W_n(x) and its truncation-error estimate.

    ``truncation`` is either an explicit order N (error estimated by the
    first omitted term) or "optimal", which truncates at the smallest term
    and reports that term's magnitude.  Both value and error are in u
    units.  Requires alpha >= 100 (large-amplitude expansion).
    """
    if alpha < 100.0:
        raise ValidationError("series evaluation requires alpha >= 100")
    mu = alpha ** -0.5
    root_a = math.sqrt(alpha)
    terms = [series_term(series, n, x) * mu ** n
             for n in range(series.n_max + 1)]
    if truncation == "optimal":
        mags = [abs(t) for t in terms[1:]]
        n_opt = 1 + mags.index(min(mags))
        value = sum(terms[: n_opt + 1])
        return root_a * value, root_a * abs(terms[n_opt])
    n_trunc = int(truncation)
    if not 0 <= n_trunc <= series.n_max:
        raise ValidationError(f"truncation order must lie in [0, {series.n_max}]")
    value = sum(terms[: n_trunc + 1])
    est = abs(terms[n_trunc + 1]) if n_trunc < series.n_max else abs(terms[-1])
    return root_a * value, root_a * est


def series_residual(series: LorentzianSeries, alpha: float, x: float,
                    n_trunc: int, h: float = 1e-4) -> float:
    """Residual mu W'' + W^2 - 1/(1+x^2) of the order-n_trunc partial sum
    (W units, centred differences); O(mu^{n_trunc+1}) when the recurrence
    and signs are consistent."""
    mu = alpha ** -0.5

    def w(xx: float) -> float:
        return sum(series_term(series, n, xx) * mu ** n
                   for n in range(n_trunc + 1))

    w0 = w(x)
    d2 = (w(x + h) - 2.0 * w0 + w(x - h)) / (h * h)
    return mu * d2 + w0 * w0 - 1.0 / (1.0 + x * x)
