"""Large-deviations layer: sCGFs, rate functions, exponents and the BSC baseline."""

from .bsc import BscScgf, MatchReport, bsc_h_half, bsc_reference, match_beta_to_bsc, match_report
from .exponents import (
    ExponentCurve,
    capacity,
    critical_rate,
    error_exponent,
    exponent_curve,
    exponent_markers,
    hard_critical_fraction,
    hard_critical_fraction_lambertw,
    hard_critical_fraction_residual,
    soft_slope_at_one,
    success_exponent,
    zpos_check,
)
from .finite import Sandwich, finite_n_sandwich, guesswork_log_moment
from .rates import (
    RATE_CAP,
    EntropyRates,
    RatePoint,
    entropy_rates,
    hard_rate_closed_form,
    inverse_rate_transform,
    rate_function,
    rate_edge_limit,
    rate_function_bits,
    rate_point,
    richardson_slope,
)
from .scgf import HARD, LN2, MODES, SOFT, SaddleState, ScgfSpec, binary_entropy, hard_maximizer, saddle_r, scgf
from .special import dilog, j_integral, j_integral_quad, spence
