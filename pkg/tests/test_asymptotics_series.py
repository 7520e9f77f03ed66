import math
from fractions import Fraction as Fr

import numpy as np
import pytest

from fkdv import forcings as F
from fkdv import shooting as S
from fkdv.asymptotics import (lorentzian_series_coefficients,
                              lorentzian_series_eval, series_residual,
                              series_term)
from fkdv.errors import ValidationError


def test_closed_form_numerators():
    s = lorentzian_series_coefficients(4, -1)
    assert s.coefficients[0] == (Fr(1),)
    # W1 = -(1/2)(2x^2 - 1)/(1+x^2)^2, sign independent
    assert s.coefficients[1] == (Fr(1, 2), Fr(0), Fr(-1))
    # W2 numerator (5/8)(4x^4 - 20x^2 + 3); W2 carries the sign of m
    assert s.coefficients[2] == (Fr(15, 8), Fr(0), Fr(-25, 2), Fr(0), Fr(5, 2))


def test_term_signs_and_shape():
    sm = lorentzian_series_coefficients(6, -1)
    sp = lorentzian_series_coefficients(6, +1)
    assert series_term(sm, 0, 0.0) == -1.0
    assert series_term(sp, 0, 0.0) == +1.0
    # W1 identical for both signs; W2 flips
    assert series_term(sm, 1, 0.4) == series_term(sp, 1, 0.4)
    assert series_term(sm, 2, 0.0) == pytest.approx(-15.0 / 8.0, rel=1e-14)
    assert series_term(sp, 2, 0.0) == pytest.approx(+15.0 / 8.0, rel=1e-14)
    # numerator degree 2n over (1+x^2)^{(1+3n)/2}
    assert len(sm.coefficients[3]) == 7
    big = series_term(sm, 3, 50.0) * (1.0 + 2500.0) ** 5
    poly = sum(float(c) * 50.0 ** i for i, c in enumerate(sm.coefficients[3]))
    assert big == pytest.approx(poly, rel=1e-12)  # m^{n+1} = +1 at n = 3, m = -1
    sp3 = series_term(sp, 3, 50.0) * (1.0 + 2500.0) ** 5
    assert sp3 == pytest.approx(poly, rel=1e-12)


def test_residual_orders():
    # substituting the N-term sum leaves a residual O(mu^{N+1})
    s = lorentzian_series_coefficients(6, -1)
    alpha = 1e4
    mu = alpha ** -0.5
    for n_trunc in (1, 2, 3):
        worst = max(abs(series_residual(s, alpha, x, n_trunc))
                    for x in np.linspace(-5.0, 5.0, 21))
        assert worst < 60.0 ** n_trunc * mu ** (n_trunc + 1)


def test_u0_large_alpha_limit():
    s = lorentzian_series_coefficients(40, -1)
    val, err = lorentzian_series_eval(s, 1e8, 0.0, "optimal")
    assert val == pytest.approx(-1e4 + 0.5, abs=1e-3)
    assert err < 1e-12


def test_fixed_truncation_and_estimates():
    s = lorentzian_series_coefficients(40, -1)
    alpha = 1e4
    val2, err2 = lorentzian_series_eval(s, alpha, 0.0, 2)
    # -100 + 1/2 + mu^2 sqrt(a) W2(0)
    expected = -100.0 + 0.5 + 1e-4 * 100.0 * (-15.0 / 8.0)
    assert val2 == pytest.approx(expected, abs=1e-9)
    # error estimate = first omitted term
    t3 = abs(series_term(s, 3, 0.0)) * (alpha ** -0.5) ** 3 * math.sqrt(alpha)
    assert err2 == pytest.approx(t3, rel=1e-12)


def test_divergence_signature():
    # term magnitudes decrease then increase at fixed alpha
    s = lorentzian_series_coefficients(40, -1)
    mu = 1e-2
    mags = [abs(series_term(s, n, 0.0)) * mu ** n for n in range(1, 41)]
    n_min = int(np.argmin(mags))
    assert 3 < n_min < 20
    assert mags[-1] > mags[n_min] * 1e3


def test_series_vs_numeric_within_estimate_moderate_alpha():
    """At alpha = 1e4 the optimally truncated series matches the bisected
    B0 amplitude within the reported smallest-term error."""
    s = lorentzian_series_coefficients(40, -1)
    alpha = 1e4
    val, err = lorentzian_series_eval(s, alpha, 0.0, "optimal")
    lor = F.lorentzian()
    # B0 has no pulse cluster: events arm just off the origin, where the
    # classification window is still wide
    cfg = S.IvpConfig(step_h=2e-4, x_max=200.0, x_far=0.3)
    root = S.find_root_near(lor, alpha, val, 0.5, cfg, n_scan=201)
    assert abs(root - val) < max(err, 5e-5)


def test_late_term_ansatz_soft_fit():
    """Late terms grow like Gamma(2n + gamma + 1)/|sigma|^{2n+gamma+1} with
    gamma = -1/6; fitting consecutive magnitude ratios at fixed x recovers
    gamma within +-0.05."""
    s = lorentzian_series_coefficients(58, -1)
    x = 0.0
    sigma_abs = math.sqrt(2.0) * 1.1981402347355923  # |sigma(0)|
    # |W_{n+1}/W_n| ~ (2n + gamma + 2)(2n + gamma + 1)/sigma^2; the +-i pair
    # interference at x = 0 cancels in ratios of |W_n| averaged over steps
    ns = np.arange(34, 54)
    mags = np.array([abs(series_term(s, int(n), x)) for n in ns])
    ratios = mags[2:] / mags[:-2]  # skip-two ratios damp the oscillation
    gammas = []
    for n, r in zip(ns[:-2], ratios):
        # r = Gamma(2n+gamma+5)/Gamma(2n+gamma+1)/sigma^4, i.e. a product of
        # four factors centred on 2n + gamma + 2.5
        target = r * sigma_abs ** 4
        gammas.append(target ** 0.25 - 2.0 * n - 2.5)
    g_fit = float(np.median(gammas))
    assert abs(g_fit - (-1.0 / 6.0)) < 0.05


def test_validation():
    with pytest.raises(ValidationError):
        lorentzian_series_coefficients(0)
    with pytest.raises(ValidationError):
        lorentzian_series_coefficients(4, 0)
    s = lorentzian_series_coefficients(4, -1)
    with pytest.raises(ValidationError):
        lorentzian_series_eval(s, 50.0, 0.0, "optimal")
