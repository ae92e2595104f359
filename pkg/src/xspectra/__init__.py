"""Spectral estimators of the bivariate Hurst exponent.

Three estimators work on the (Daniell-smoothed) cross-periodogram of a
pair of series: the averaged periodogram (APE), the cross-periodogram
log-log regression (XPE) and the local X-Whittle minimiser (LXW).
Simulators for correlated and mixed-correlated ARFIMA pairs and a Monte
Carlo harness reproduce the bias/variance study over bandwidth and
innovation correlation.
"""

from .arfima import (
    ArfimaSpec,
    FracCoeffs,
    McArfimaSpec,
    correlated_normals,
    frac_coeffs,
    fractional_filter,
    simulate_correlated_arfima,
    simulate_mc_arfima,
)
from .errors import *  # noqa: F401,F403
from .estimators import (
    EstimateResult,
    EstimatorConfig,
    asymptotic_reference,
    cumulative_cross_periodogram,
    estimate_ape,
    estimate_lxw,
    estimate_xpe,
    lxw_objective,
)
from .spectral import (
    CrossSpectrum,
    FrequencyGrid,
    cross_periodogram,
    daniell_smooth,
    discrete_fourier,
    fourier_frequencies,
    smoothed_cross_periodogram,
)
from .study import (
    Model,
    StudyGrid,
    StudySummary,
    run_study,
    summarize,
    true_h_xy,
    variance_scaling_exponent,
)

__version__ = "0.1.0"
