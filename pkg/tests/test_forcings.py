import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from fkdv import forcings as F
from fkdv.errors import ValidationError

ALL_KINDS = [F.top_hat(0.5), F.gaussian(), F.lorentzian(), F.hybrid(0.7),
             F.marginal_quartic()]


def test_normalization_at_zero():
    for f in ALL_KINDS:
        assert F.evaluate(f, 0.0) == 1.0
    for a in np.linspace(0.0, 1.0, 11):
        assert F.evaluate(F.hybrid(float(a)), 0.0) == 1.0


@given(st.floats(-50.0, 50.0))
def test_evenness_exact(x):
    for f in ALL_KINDS:
        assert F.evaluate(f, x) == F.evaluate(f, -x)


def test_evenness_grid():
    rng = np.random.default_rng(42)
    xs = rng.uniform(-50.0, 50.0, 1000)
    for f in ALL_KINDS:
        for x in xs:
            assert F.evaluate(f, float(x)) == F.evaluate(f, float(-x))


def test_nonnegative():
    xs = np.linspace(-30.0, 30.0, 401)
    for f in ALL_KINDS:
        assert all(F.evaluate(f, float(x)) >= 0.0 for x in xs)


def test_point_values():
    assert F.evaluate(F.gaussian(), 0.0) == 1.0
    assert F.evaluate(F.lorentzian(), 1.0) == 0.5
    # e^{-1.2}/3.8, cross-checked against a 30-digit evaluation
    assert F.evaluate(F.hybrid(0.7), 2.0) == pytest.approx(
        0.0792616347137373938, rel=1e-14)
    assert F.evaluate(F.top_hat(1.0), 1.0) == 0.5  # symmetric jump value


def test_hybrid_endpoints_reduce():
    xs = np.linspace(-10.0, 10.0, 201)
    g, lor = F.gaussian(), F.lorentzian()
    for x in xs:
        assert F.evaluate(F.hybrid(0.0), float(x)) == F.evaluate(g, float(x))
        assert F.evaluate(F.hybrid(1.0), float(x)) == F.evaluate(lor, float(x))


def test_hybrid_continuity_near_gaussian():
    xs = np.linspace(-10.0, 10.0, 401)
    h = F.hybrid(1e-6)
    g = F.gaussian()
    dev = max(abs(F.evaluate(h, float(x)) - F.evaluate(g, float(x))) for x in xs)
    assert dev < 1e-4


def test_second_derivative_at_zero():
    assert F.second_derivative_at_zero(F.gaussian()) == -2.0
    assert F.second_derivative_at_zero(F.lorentzian()) == -2.0
    assert F.second_derivative_at_zero(F.hybrid(0.34)) == -2.0
    assert F.second_derivative_at_zero(F.marginal_quartic()) == 0.0
    with pytest.raises(ValidationError):
        F.second_derivative_at_zero(F.top_hat(1.0))


def test_masses():
    assert F.mass(F.gaussian()) == pytest.approx(math.sqrt(math.pi), rel=1e-15)
    assert F.mass(F.lorentzian()) == pytest.approx(math.pi, rel=1e-15)
    assert F.mass(F.top_hat(1.0)) == 2.0
    # int dx/(1+x^4) over the line = pi/sqrt(2) (residue value)
    assert F.mass(F.marginal_quartic()) == pytest.approx(
        2.2214414690791831235, rel=1e-14)


def test_mass_quadrature_consistency():
    # closed forms against direct quadrature at 1e-9 relative
    from scipy.integrate import quad
    for f in (F.gaussian(), F.lorentzian(), F.marginal_quartic()):
        val, _ = quad(lambda x: F.evaluate(f, x), 0.0, np.inf,
                      epsabs=0.0, epsrel=1e-11, limit=200)
        assert 2.0 * val == pytest.approx(F.mass(f), rel=1e-9)


def test_hybrid_mass_between_limits():
    m = F.mass(F.hybrid(0.5))
    assert math.sqrt(math.pi) < m < math.pi
    assert F.mass(F.hybrid(0.5)) == m  # cached, identical


def test_decay_classes():
    assert F.decay_class(F.top_hat(0.5)) is F.DecayClass.COMPACT_SUPPORT
    assert F.decay_class(F.gaussian()) is F.DecayClass.FASTER_THAN_QUARTIC
    assert F.decay_class(F.lorentzian()) is F.DecayClass.SLOWER_THAN_QUARTIC
    assert F.decay_class(F.marginal_quartic()) is F.DecayClass.MARGINAL_QUARTIC
    assert F.decay_class(F.hybrid(0.7)) is F.DecayClass.FASTER_THAN_QUARTIC
    assert F.decay_class(F.hybrid(1.0)) is F.DecayClass.SLOWER_THAN_QUARTIC


def test_lorentzian_complex():
    assert F.lorentzian_complex(2j) == pytest.approx(1.0 / (1.0 + (2j) ** 2))
    assert F.lorentzian_complex(1.0 + 0j) == pytest.approx(0.5)


def test_token_parsing():
    assert F.parse_forcing_token("gaussian").kind is F.Kind.GAUSSIAN
    assert F.parse_forcing_token("tophat:L=1.0").param == 1.0
    assert F.parse_forcing_token("tophat").param == 0.5
    assert F.parse_forcing_token("hybrid:a=0.7").param == 0.7
    assert F.parse_forcing_token("marginal").kind is F.Kind.MARGINAL_QUARTIC
    for bad in ("gauss", "hybrid", "hybrid:b=1", "tophat:L=x", "lorentzian:a=1"):
        with pytest.raises(ValidationError) as err:
            F.parse_forcing_token(bad)
        assert "tokens" in str(err.value)


def test_invalid_parameters():
    with pytest.raises(ValidationError):
        F.top_hat(-1.0)
    with pytest.raises(ValidationError):
        F.hybrid(1.5)
