import math

import pytest

from fkdv import forcings as F
from fkdv import shooting as S
from fkdv.asymptotics import (small_alpha_model, small_alpha_outer_profile,
                              small_alpha_u0)
from fkdv.errors import ValidationError


def test_model_constants_gaussian():
    model = small_alpha_model(F.gaussian())
    assert model.M == pytest.approx(math.sqrt(math.pi), rel=1e-15)
    # X0 = 2 * 3^{1/3} / pi^{1/6} ~ 2.38
    assert model.X0 == pytest.approx(2.0 * 3.0 ** (1 / 3) / math.pi ** (1 / 6),
                                     rel=1e-14)
    assert model.X0 == pytest.approx(2.38, abs=5e-3)
    # c1 equals the outer value -6/X0^2 (the matching is exact)
    assert model.c1 == pytest.approx(-6.0 / model.X0 ** 2, rel=1e-14)


def test_u0_formula_values():
    a = 1.928e-4
    expect = -(3.0 ** (1 / 3) * math.pi ** (1 / 3) / 2.0) * a ** (2 / 3) + a / 2
    assert small_alpha_u0(F.gaussian(), a) == pytest.approx(expect, rel=1e-14)
    # general forcing gets no a/2 correction
    assert small_alpha_u0(F.lorentzian(), a) == pytest.approx(
        -(3.0 ** (1 / 3) * math.pi ** (2 / 3) / 2.0) * a ** (2 / 3), rel=1e-14)
    assert small_alpha_u0(F.gaussian(), 1e-12) == pytest.approx(0.0, abs=1e-7)
    with pytest.raises(ValidationError):
        small_alpha_u0(F.gaussian(), -1.0)


def test_outer_profile_and_mass_jump():
    g = F.gaussian()
    model = small_alpha_model(g)
    assert small_alpha_outer_profile(g, 1e-4, 0.0) == pytest.approx(
        -6.0 / model.X0 ** 2, rel=1e-14)
    # ~ -6/X^2 far out
    assert small_alpha_outer_profile(g, 1e-4, 50.0) == pytest.approx(
        -6.0 / (50.0 + model.X0) ** 2, rel=1e-14)
    # corner slope jump equals the mass exactly: 2 * 12 / X0^3 = M
    assert 24.0 / model.X0 ** 3 == pytest.approx(model.M, rel=1e-12)


def test_numeric_agreement_trend():
    g = F.gaussian()
    rels = {}
    for a in (1e-2, 1e-3, 1e-4):
        asym = small_alpha_u0(g, a)
        root = S.bisect_u0(g, a, (3.0 * asym, 0.2 * asym), S.default_config(g, a))
        rels[a] = abs(root - asym) / abs(root)
    assert rels[1e-4] < rels[1e-3] < rels[1e-2]
    assert rels[1e-4] < 0.02
    # roughly an alpha^{1/3} trend per decade
    assert rels[1e-4] / rels[1e-3] < 0.6
    assert rels[1e-3] / rels[1e-2] < 0.6


def test_outer_profile_collapse_numeric():
    g = F.gaussian()
    model = small_alpha_model(g)
    a = 1.928e-4
    asym = model.u0(a)
    cfg = S.default_config(g, a)
    root = S.bisect_u0(g, a, (3.0 * asym, 0.2 * asym), cfg)
    tr = S.integrate_ivp(g, a, root, cfg)
    xs, us, _ = tr.trusted()
    import numpy as np
    X = a ** (1 / 3) * xs
    mask = (X > 0.5) & (X < 3.0)
    V_num = us[mask] / a ** (2 / 3)
    V_asym = -6.0 / (model.X0 + X[mask]) ** 2
    assert float(np.max(np.abs(V_num - V_asym) / np.abs(V_asym))) < 0.05
