import math

import numpy as np
import pytest

from fkdv import branches as B
from fkdv import forcings as F
from fkdv import shooting as S
from fkdv import tophat as T
from fkdv.asymptotics import termination_outer_profile, termination_slope_jump
from fkdv.errors import ValidationError


def test_count_maxima_shapes():
    xs = np.linspace(0.0, 10.0, 2001)
    # single negative well: no maxima
    well = -1.0 / (1.0 + xs ** 2)
    assert B.count_maxima(xs, well) == 0
    # central pulse: one maximum (at the centre)
    pulse = 3.0 / np.cosh(xs) ** 2 - 1.0
    assert B.count_maxima(xs, pulse) == 1
    # triple pulse: centre plus a pair
    triple = (3.0 / np.cosh(xs) ** 2 + 2.9 / np.cosh(xs - 5.0) ** 2 - 1.0)
    assert B.count_maxima(xs, triple) == 3


def test_count_maxima_noise_floor():
    xs = np.linspace(0.0, 1.0, 101)
    u = np.ones(101)
    u[50] += 1e-12  # beneath the 1e-9 max|u| floor
    assert B.count_maxima(xs, u) == 0


def test_branch_json_roundtrip(tmp_path):
    br = B.Branch(label_n=1,
                  points=[B.BranchPoint(36.0, 8.5454, 1, 1e-3)],
                  termination=B.TerminationRecord(35.36, 0.41, True))
    text = br.to_json()
    back = B.Branch.from_json(text)
    assert back.label_n == 1
    assert back.points[0].alpha == 36.0
    assert back.termination.kappa == 0.41
    br2 = B.Branch(label_n=0, points=[B.BranchPoint(1.0, -0.5, 0, 1e-4)])
    assert B.Branch.from_json(br2.to_json()).termination is None


def test_gaussian_b1_trace_fold(gaussian_b1_branch):
    br = gaussian_b1_branch
    assert br.label_n == 1
    assert br.folds, "the Gaussian B1 hook must contain a fold"
    alphas = [p.alpha for p in br.points]
    assert min(alphas) < 35.4  # reaches below the termination amplitude
    assert all(p.maxima_count == 1 for p in br.points)


def test_gaussian_b1_termination_value(gaussian_b1_branch,
                                       gaussian_b1_termination):
    alpha_star, profile, kappa = gaussian_b1_termination
    # repo-generated reference; the bracketing is sharp to ~1e-6 relative
    assert alpha_star == pytest.approx(35.363, abs=2e-2)
    fold_alpha = gaussian_b1_branch.points[gaussian_b1_branch.folds[0]].alpha
    assert alpha_star > fold_alpha


def test_gaussian_kappa_positive_and_linear(gaussian_b1_termination):
    alpha_star, profile, kappa = gaussian_b1_termination
    g = F.gaussian()
    xs, us, _ = profile.trusted()
    assert kappa > 0.0
    km = B.kappa_bvp(g, alpha_star, xs, us, -1)
    assert km == pytest.approx(-kappa, rel=1e-12)
    with pytest.raises(ValidationError):
        B.kappa_bvp(g, alpha_star, xs, us, 2)


def test_kappa_horizon_independence(gaussian_b1_termination):
    alpha_star, profile, kappa = gaussian_b1_termination
    g = F.gaussian()
    xs, us, _ = profile.trusted()
    k24 = B.kappa_bvp(g, alpha_star, xs, us, +1, x_max=24.0)
    assert k24 == pytest.approx(kappa, rel=5e-3)


def test_termination_outer_profile_collapse(gaussian_b1_branch,
                                            gaussian_b1_termination):
    """Rescaled numerics near the termination collapse onto
    v0 = -6/(|X| + sqrt(6/|kappa|))^2."""
    alpha_star, _, kappa = gaussian_b1_termination
    g = F.gaussian()
    # the terminating sheet only exists between its fold (~35.317) and the
    # termination (~35.363); stay inside that window
    eps = 0.03
    a = alpha_star - eps
    cfg = S.default_config(g, a, n_hint=3)
    root = S.find_root_near(g, a, 8.218, 0.05, cfg, n_scan=201)
    tr = S.integrate_ivp(g, a, root, cfg)
    xs, us, _ = tr.trusted()
    X = math.sqrt(eps) * xs
    mask = (X > 0.8) & (X < 2.5)  # outer window away from the inner core
    v_num = us[mask] / eps
    v_outer = np.array([termination_outer_profile(kappa, float(xx))
                        for xx in X[mask]])
    rel = np.max(np.abs(v_num - v_outer) / np.abs(v_outer))
    assert rel < 0.25  # leading-order outer profile, eps = 0.35


def test_slope_jump_formula():
    assert termination_slope_jump(1.0) == pytest.approx(
        2.0 * math.sqrt(2.0 / 3.0), rel=1e-14)
    assert termination_outer_profile(2.0, 0.0) == pytest.approx(-2.0, rel=1e-12)
    with pytest.raises(ValidationError):
        termination_outer_profile(0.0, 1.0)


def test_locate_termination_rejects_slow_decay(lorentzian_connected_branch):
    with pytest.raises(ValidationError):
        B.locate_termination(F.lorentzian(), lorentzian_connected_branch)


def test_lorentzian_connectivity(lorentzian_connected_branch):
    br = lorentzian_connected_branch
    counts = [p.maxima_count for p in br.points]
    assert counts[0] == 1
    assert counts[-1] == 2
    assert br.folds, "the B1-B2 connection passes through a fold"
    # taxonomy is constant between folds
    fold = br.folds[0]
    assert all(c == 1 for c in counts[: max(fold - 1, 1)])
    assert all(c == 2 for c in counts[fold + 2:])


def test_lorentzian_persistence_no_termination():
    """Every sampled amplitude in [30, 200] on the connected B1/B2 family
    yields a converged root (no termination for slow decay)."""
    lor = F.lorentzian()
    guess = 4.35  # B2 sheet near alpha = 30
    for a in np.linspace(30.0, 200.0, 18):
        a = float(a)
        cfg = S.default_config(lor, a, n_hint=3)
        root = S.find_root_near(lor, a, guess, 0.8, cfg, n_scan=401)
        assert math.isfinite(root)
        guess = root


def test_trace_validation_errors(gaussian_b1):
    with pytest.raises(ValidationError):
        B.trace_branch(F.gaussian(), gaussian_b1, alpha_step=0.0)
