"""Shared fixtures.  The expensive branch computations (terminations,
connected traces) are session-scoped so the module tests and the
acceptance suite share one run."""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import settings

from fkdv import branches as B
from fkdv import forcings as F
from fkdv import shooting as S
from fkdv import tophat as T

settings.register_profile("det", derandomize=True, max_examples=60)
settings.load_profile("det")


@pytest.fixture(scope="session")
def gaussian_b1():
    """Seed point on the Gaussian B1 branch at alpha = 36."""
    g = F.gaussian()
    cfg = S.default_config(g, 36.0)
    root = S.bisect_u0(g, 36.0, (8.54, 8.55), cfg)
    return B.make_branch_point(g, 36.0, root, cfg)


@pytest.fixture(scope="session")
def gaussian_b1_branch(gaussian_b1):
    """Gaussian B1 traced down through its fold."""
    return B.trace_branch(F.gaussian(), gaussian_b1, alpha_step=-0.05,
                          max_points=80)


@pytest.fixture(scope="session")
def gaussian_b1_termination(gaussian_b1_branch):
    """(alpha_star, fine-step limiting profile, kappa) for Gaussian B1."""
    g = F.gaussian()
    alpha_star, profile = B.locate_termination(
        g, gaussian_b1_branch, rel_tol=1e-9, profile_step_h=2.5e-4)
    xs, us, _ = profile.trusted()
    kappa = B.kappa_bvp(g, alpha_star, xs, us, +1)
    return alpha_star, profile, kappa


@pytest.fixture(scope="session")
def lorentzian_b1_root():
    lor = F.lorentzian()
    cfg = S.default_config(lor, 26.44)
    return S.bisect_u0(lor, 26.44, (8.2980, 8.2989), cfg)


@pytest.fixture(scope="session")
def lorentzian_connected_branch(lorentzian_b1_root):
    """The B1 -> fold -> B2 connected trace for the Lorentzian."""
    lor = F.lorentzian()
    cfg = S.default_config(lor, 26.44)
    seed = B.make_branch_point(lor, 26.44, lorentzian_b1_root, cfg)
    return B.trace_branch(lor, seed, alpha_step=-0.1, alpha_ceiling=31.0,
                          max_points=320)


@pytest.fixture(scope="session")
def marginal_traces():
    """Coarse B1 trace plus the fine inner-spiral trace for the marginal
    forcing; returns (coarse_branch, fine_branch)."""
    m = F.marginal_quartic()
    cfg = S.default_config(m, 30.0)
    root = S.find_root_near(m, 30.0, 9.2, 1.2, cfg, n_scan=401)
    seed = B.make_branch_point(m, 30.0, root, cfg)
    coarse = B.trace_branch(m, seed, alpha_step=-0.1, alpha_ceiling=30.5,
                            max_points=140)
    # seed the fine trace just past the second (upper, ~20.2) spiral fold
    upper_folds = [i for i in coarse.folds
                   if coarse.points[i].alpha > 19.0]
    idx = upper_folds[0]
    nxt = coarse.points[min(idx + 1, len(coarse.points) - 1)]
    cfg2 = S.default_config(m, nxt.alpha)
    seed2 = B.make_branch_point(m, nxt.alpha, nxt.u0, cfg2)
    fine = B.trace_branch(m, seed2, alpha_step=-0.01, alpha_ceiling=20.6,
                          max_points=220)
    return coarse, fine


@pytest.fixture(scope="session")
def tophat_b1_termination():
    """Numerically located termination of the top-hat B1 branch."""
    f = F.top_hat(0.5)
    a1 = T.critical_alpha(1)
    pts = []
    for a in (a1 * 1.25, a1 * 1.2):
        sol = T.solve_exact(a, 1)
        cfg = S.default_config(f, a)
        root = S.find_root_near(f, a, sol.u0, 0.5, cfg)
        pts.append(B.make_branch_point(f, a, root, cfg))
    branch = B.Branch(label_n=1, points=pts)
    alpha_star, profile = B.locate_termination(f, branch)
    return alpha_star, profile
