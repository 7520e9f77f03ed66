"""Asymptotic engines: small-amplitude laws, the large-amplitude Lorentzian
series, homoclinic glueing, the termination outer profile and the marginal
far-field exponents."""

from .small_alpha import (SmallAlphaModel, small_alpha_model, small_alpha_u0,
                          small_alpha_outer_profile, termination_outer_profile,
                          termination_slope_jump)
from .series import (LorentzianSeries, lorentzian_series_coefficients,
                     lorentzian_series_eval, series_term, series_residual)
from .glue_functions import (GLUE_FUNCTIONS, glueing_functions_eval, u0_homoclinic,
                             phi_a, phi_s, phi_p0, phi_p1, phi_p2, phi_glue,
                             psi_k, tail_integral_identity_value)
from .glueing import (GlueingPlan, solve_glueing_plan, glueing_profile)
from .marginal import MarginalExponents, marginal_exponents

__all__ = [
    "SmallAlphaModel", "small_alpha_model", "small_alpha_u0",
    "small_alpha_outer_profile", "termination_outer_profile",
    "termination_slope_jump",
    "LorentzianSeries", "lorentzian_series_coefficients",
    "lorentzian_series_eval", "series_term", "series_residual",
    "GLUE_FUNCTIONS", "glueing_functions_eval", "u0_homoclinic",
    "phi_a", "phi_s", "phi_p0", "phi_p1", "phi_p2", "phi_glue", "psi_k",
    "tail_integral_identity_value",
    "GlueingPlan", "solve_glueing_plan", "glueing_profile",
    "MarginalExponents", "marginal_exponents",
]
