import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from fkdv import specfun as SF
from fkdv.errors import ValidationError

# frozen 30-digit reference values (independent arbitrary-precision oracle)
K_LEMNISCATIC = 1.8540746773013719184
GAMMA_34 = 1.2254167024651776451
GAMMA_13 = 2.6789385347077476337
GAMMA_037 = 2.4035500200786532485
I1_1 = 0.5651591039924850272
I1_75 = 249.58436542268813610
I1_40 = 1.47073961632593527e16
CN_07_K06 = 0.7766623641084567310   # cn(0.7, k = 0.6)
CN_13_KHALF = 0.3908686328094734899  # cn(1.3, k = 1/sqrt 2)
SN_13_KHALF = 0.9204464742100178114
E_K03 = 1.5348334649232490416  # E(k = 0.3)
K_K03 = 1.6080486199305128013


def test_elliptic_K():
    assert SF.elliptic_K(0.0) == pytest.approx(math.pi / 2.0, rel=1e-15)
    assert SF.elliptic_K(1.0 / math.sqrt(2.0)) == pytest.approx(
        K_LEMNISCATIC, rel=1e-13)
    # also equals Gamma(1/4)^2 / (4 sqrt(pi))
    g14 = SF.gamma_fn(0.25)
    assert SF.elliptic_K(1.0 / math.sqrt(2.0)) == pytest.approx(
        g14 * g14 / (4.0 * math.sqrt(math.pi)), rel=1e-12)
    with pytest.raises(ValidationError):
        SF.elliptic_K(1.0)


def test_critical_constant():
    val = 48.0 * SF.elliptic_K(1.0 / math.sqrt(2.0)) ** 4
    assert abs(val - 567.0) / 567.0 < 2e-3


def test_legendre_relation():
    k = 0.3
    kp = math.sqrt(1.0 - k * k)
    lhs = (SF.elliptic_E(k) * SF.elliptic_K(kp)
           + SF.elliptic_E(kp) * SF.elliptic_K(k)
           - SF.elliptic_K(k) * SF.elliptic_K(kp))
    assert lhs == pytest.approx(math.pi / 2.0, abs=1e-10)
    assert SF.elliptic_E(k) == pytest.approx(E_K03, rel=1e-13)
    assert SF.elliptic_K(k) == pytest.approx(K_K03, rel=1e-13)


def test_jacobi_cn_values():
    assert SF.jacobi_cn(0.0, 0.5) == 1.0
    assert SF.jacobi_cn(0.3, 0.0) == pytest.approx(math.cos(0.3), abs=1e-14)
    k = 0.5
    assert abs(SF.jacobi_cn(SF.elliptic_K(k), k)) < 1e-12
    assert SF.jacobi_cn(0.7, 0.6) == pytest.approx(CN_07_K06, abs=1e-12)
    assert SF.jacobi_cn(1.3, 1.0 / math.sqrt(2.0)) == pytest.approx(
        CN_13_KHALF, abs=1e-12)
    assert SF.jacobi_sn(1.3, 1.0 / math.sqrt(2.0)) == pytest.approx(
        SN_13_KHALF, abs=1e-12)


def test_cn_periodicity():
    k = 0.77
    period = 4.0 * SF.elliptic_K(k)
    for u in (0.3, 1.9, -2.4):
        assert SF.jacobi_cn(u + period, k) == pytest.approx(
            SF.jacobi_cn(u, k), abs=1e-11)


@given(st.floats(-8.0, 8.0), st.floats(0.0, 0.95))
def test_cn_sn_identity(u, k):
    cn = SF.jacobi_cn(u, k)
    sn = SF.jacobi_sn(u, k)
    assert abs(cn) <= 1.0 + 1e-12
    assert cn * cn + sn * sn == pytest.approx(1.0, abs=1e-10)


def test_cn_sn_identity_grid():
    rng = np.random.default_rng(7)
    for u, k in zip(rng.uniform(-10, 10, 1000), rng.uniform(0.0, 0.97, 1000)):
        c = SF.jacobi_cn(float(u), float(k))
        s = SF.jacobi_sn(float(u), float(k))
        assert abs(c * c + s * s - 1.0) < 1e-10


def test_gamma_values():
    assert SF.gamma_fn(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-13)
    assert SF.gamma_fn(0.75) == pytest.approx(GAMMA_34, rel=1e-12)
    assert SF.gamma_fn(1.0 / 3.0) == pytest.approx(GAMMA_13, rel=1e-12)
    assert SF.gamma_fn(0.37) == pytest.approx(GAMMA_037, rel=1e-12)
    assert SF.gamma_fn(6.0) == pytest.approx(120.0, rel=1e-12)
    # rho constant of the Stokes parabola
    rho = math.sqrt(2.0 / math.pi) * SF.gamma_fn(0.75) ** 2
    assert rho == pytest.approx(1.198, abs=5e-4)
    with pytest.raises(ValidationError):
        SF.gamma_fn(-3.0)


@given(st.floats(0.1, 10.0))
def test_gamma_recurrence(x):
    assert SF.gamma_fn(x + 1.0) == pytest.approx(x * SF.gamma_fn(x), rel=1e-11)


def test_bessel_I1():
    assert SF.bessel_I1(0.0) == 0.0
    assert SF.bessel_I1(1.0) == pytest.approx(I1_1, rel=1e-11)
    assert SF.bessel_I1(7.5) == pytest.approx(I1_75, rel=1e-11)
    assert SF.bessel_I1(40.0) == pytest.approx(I1_40, rel=1e-10)
    # asymptotic growth claim used for the far-field instability argument
    x = 30.0
    ratio = SF.bessel_I1(x) / (math.exp(x) / math.sqrt(2.0 * math.pi * x))
    assert abs(ratio - 1.0) < 0.02
    with pytest.raises(ValidationError):
        SF.bessel_I1(-1.0)


def test_bessel_series_asymptotic_crossover():
    # both branches accurate against frozen references either side of the
    # documented crossover at x = 30
    assert SF.bessel_I1(29.0) == pytest.approx(287432108126.2548, rel=1e-10)
    assert SF.bessel_I1(31.0) == pytest.approx(2055972795294.5647, rel=1e-10)
