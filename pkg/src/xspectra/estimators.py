"""Bivariate Hurst exponent estimators on the (smoothed) cross-periodogram.

APE
    averaged periodogram: ratio of the cumulative cross-periodogram at
    ``q*lambda_m`` and ``lambda_m``.
XPE
    log-log regression of ``|I_xy(lambda_j)|`` on ``lambda_j``, ``j <= m``.
LXW
    local X-Whittle: bounded minimisation of a Kuensch-type local likelihood.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import (
    DegenerateInputError,
    InsufficientPointsError,
    InvalidParameterError,
    LogOfZeroError,
    NoReferenceError,
    NonPositiveSpectrumError,
)
from .spectral import CrossSpectrum, smoothed_cross_periodogram

ESTIMATORS = ("APE", "XPE", "LXW")
APE_PARTS = ("modulus", "cospectrum")


@dataclass(frozen=True)
class EstimatorConfig:
    """Tuning shared by the three estimators.

    Give the bandwidth either as an integer ``m`` or as a fraction
    ``m_over_T`` of the sample length; the fraction resolves to
    ``max(2, floor(m_over_T * T))``.
    """

    m: Optional[int] = None
    m_over_T: Optional[float] = None
    q: float = 0.5
    ape_part: str = "modulus"
    smoothing_span: int = 21
    lxw_lower: float = 0.5 + 1e-6
    lxw_upper: float = 1.0
    lxw_tol: float = 1e-6
    demean: bool = True

    def __post_init__(self):
        if (self.m is None) == (self.m_over_T is None):
            raise InvalidParameterError("give exactly one of m and m_over_T")
        if self.m is not None and self.m < 2:
            raise InsufficientPointsError(f"bandwidth m must be at least 2, got {self.m}")
        if self.m_over_T is not None and not 0.0 < self.m_over_T <= 0.5:
            raise InvalidParameterError(f"m_over_T must lie in (0, 0.5], got {self.m_over_T}")
        if not 0.0 < self.q < 1.0:
            raise InvalidParameterError(f"q must lie in (0, 1), got {self.q}")
        if self.ape_part not in APE_PARTS:
            raise InvalidParameterError(f"ape_part must be one of {APE_PARTS}, got {self.ape_part!r}")
        if self.smoothing_span and (self.smoothing_span < 3 or self.smoothing_span % 2 == 0):
            raise InvalidParameterError(
                f"smoothing_span must be 0 or an odd integer >= 3, got {self.smoothing_span}"
            )
        if not self.lxw_lower < self.lxw_upper:
            raise InvalidParameterError("lxw_lower must be below lxw_upper")
        if self.lxw_tol <= 0:
            raise InvalidParameterError("lxw_tol must be positive")

    def resolve_m(self, T: int) -> int:
        if self.m is not None:
            m = int(self.m)
        else:
            m = max(2, int(math.floor(self.m_over_T * T + 1e-9)))
        if m > T // 2:
            raise InvalidParameterError(f"bandwidth m={m} exceeds T//2={T // 2}")
        return m


@dataclass(frozen=True)
class EstimateResult:
    estimator: str
    h_xy: float
    m_used: int
    diagnostics: dict = field(default_factory=dict)


def _check_m(spectrum: CrossSpectrum, m: int, minimum: int = 2) -> int:
    m = int(m)
    if m < minimum:
        raise InsufficientPointsError(f"need at least {minimum} frequencies, got m={m}")
    if m > len(spectrum):
        raise InvalidParameterError(f"m={m} exceeds spectrum length {len(spectrum)}")
    return m


# --- APE -------------------------------------------------------------------


def _ape_summands(spectrum: CrossSpectrum, part: str) -> np.ndarray:
    if part == "modulus":
        return np.abs(spectrum.values)
    if part == "cospectrum":
        return spectrum.values.real
    raise InvalidParameterError(f"APE part must be one of {APE_PARTS}, got {part!r}")


def cumulative_cross_periodogram(spectrum: CrossSpectrum, m: int, lam: float,
                                 part: str = "modulus") -> float:
    """Cumulative cross-periodogram ``(2 pi / T) sum_{j <= floor(T lam / 2 pi)} I_j``.

    ``I_j`` is ``|I_xy(lambda_j)|`` (``part="modulus"``) or
    ``Re I_xy(lambda_j)`` (``part="cospectrum"``). The sum is restricted to
    the bandwidth ``j <= m``; an empty sum gives 0.
    """
    if lam <= 0:
        raise InvalidParameterError(f"lambda must be positive, got {lam}")
    m = _check_m(spectrum, m, minimum=1)
    T = spectrum.T
    count = min(int(math.floor(T * lam / (2.0 * math.pi) + 1e-9)), m)
    if count == 0:
        return 0.0
    return float(2.0 * math.pi / T * np.sum(_ape_summands(spectrum, part)[:count]))


def ape_from_spectrum(spectrum: CrossSpectrum, m: int, q: float = 0.5,
                      part: str = "modulus") -> EstimateResult:
    if not 0.0 < q < 1.0:
        raise InvalidParameterError(f"q must lie in (0, 1), got {q}")
    m = _check_m(spectrum, m)
    lam_m = 2.0 * math.pi * m / spectrum.T
    f_top = cumulative_cross_periodogram(spectrum, m, lam_m, part)
    f_low = cumulative_cross_periodogram(spectrum, m, q * lam_m, part)
    if f_top == 0.0:
        raise DegenerateInputError("cumulative cross-periodogram vanishes at lambda_m")
    ratio = f_low / f_top
    if not ratio > 0.0:
        raise NonPositiveSpectrumError(
            f"cumulative cross-periodogram ratio {ratio:.4g} is not positive; APE undefined"
        )
    h = 1.0 - math.log(ratio) / (2.0 * math.log(q))
    return EstimateResult("APE", h, m, {"F_q_lambda_m": f_low, "F_lambda_m": f_top})


# --- XPE -------------------------------------------------------------------


def xpe_from_spectrum(spectrum: CrossSpectrum, m: int) -> EstimateResult:
    m = _check_m(spectrum, m, minimum=3)
    mag = np.abs(spectrum.values[:m])
    if np.any(mag == 0.0):
        raise LogOfZeroError("cross-periodogram magnitude is zero inside the bandwidth")
    X = np.log(spectrum.frequencies[:m])
    Y = np.log(mag)
    xc = X - X.mean()
    sxx = xc @ xc
    slope = (xc @ (Y - Y.mean())) / sxx
    intercept = Y.mean() - slope * X.mean()
    resid = Y - intercept - slope * X
    slope_se = math.sqrt((resid @ resid) / (m - 2) / sxx)
    return EstimateResult(
        "XPE", (1.0 - slope) / 2.0, m, {"intercept": float(intercept), "slope_se": slope_se}
    )


# --- LXW -------------------------------------------------------------------


class _LxwObjective:
    """R(h) for a fixed spectrum slice; precomputes the logs once."""

    def __init__(self, spectrum: CrossSpectrum, m: int):
        m = _check_m(spectrum, m)
        mag = np.abs(spectrum.values[:m])
        if not np.any(mag > 0.0):
            raise LogOfZeroError("cross-periodogram magnitude is zero on all of j <= m")
        self.m = m
        self.log_lam = np.log(spectrum.frequencies[:m])
        self.mean_log_lam = self.log_lam.mean()
        pos = mag > 0.0
        self._log_lam_pos = self.log_lam[pos]
        self._log_mag = np.log(mag[pos])

    def __call__(self, h: float) -> float:
        a = 2.0 * h - 1.0
        # log-mean-exp keeps lambda^{2h-1} |I| from underflowing
        z = a * self._log_lam_pos + self._log_mag
        zmax = z.max()
        log_mean = zmax + math.log(np.exp(z - zmax).sum() / self.m)
        return float(log_mean - a * self.mean_log_lam)


def lxw_objective(spectrum: CrossSpectrum, m: int, h: float) -> float:
    """Local X-Whittle objective

    ``R(h) = log(mean_j lambda_j^{2h-1} |I_xy(lambda_j)|) - (2h-1) mean_j log lambda_j``
    over ``j = 1 .. m``.
    """
    return _LxwObjective(spectrum, m)(h)


def lxw_from_spectrum(
    spectrum: CrossSpectrum,
    m: int,
    lower: float = 0.5 + 1e-6,
    upper: float = 1.0,
    tol: float = 1e-6,
) -> EstimateResult:
    if not lower < upper:
        raise InvalidParameterError("lower bound must be below upper bound")
    R = _LxwObjective(spectrum, m)
    res = minimize_scalar(R, bounds=(lower, upper), method="bounded",
                          options={"xatol": tol, "maxiter": 500})
    h, val = float(res.x), float(res.fun)
    # the bounded search never probes the endpoints themselves
    for edge in (lower, upper):
        r_edge = R(edge)
        if r_edge <= val:
            h, val = edge, r_edge
    boundary = h - lower <= tol or upper - h <= tol
    return EstimateResult("LXW", h, R.m, {"objective": val, "boundary_hit": bool(boundary)})


# --- wrappers on raw series ------------------------------------------------


def _spectrum_for(x, y, config: EstimatorConfig) -> tuple[CrossSpectrum, int]:
    spec = smoothed_cross_periodogram(x, y, span=config.smoothing_span, demean=config.demean)
    return spec, config.resolve_m(spec.T)


def estimate_from_spectrum(name: str, spectrum: CrossSpectrum, m: int,
                           config: EstimatorConfig) -> EstimateResult:
    name = name.upper()
    if name == "APE":
        return ape_from_spectrum(spectrum, m, config.q, config.ape_part)
    if name == "XPE":
        return xpe_from_spectrum(spectrum, m)
    if name == "LXW":
        return lxw_from_spectrum(spectrum, m, config.lxw_lower, config.lxw_upper, config.lxw_tol)
    raise InvalidParameterError(f"unknown estimator {name!r}")


def estimate_ape(x, y, config: EstimatorConfig) -> EstimateResult:
    spec, m = _spectrum_for(x, y, config)
    return ape_from_spectrum(spec, m, config.q, config.ape_part)


def estimate_xpe(x, y, config: EstimatorConfig) -> EstimateResult:
    spec, m = _spectrum_for(x, y, config)
    return xpe_from_spectrum(spec, m)


def estimate_lxw(x, y, config: EstimatorConfig) -> EstimateResult:
    spec, m = _spectrum_for(x, y, config)
    return lxw_from_spectrum(spec, m, config.lxw_lower, config.lxw_upper, config.lxw_tol)


def asymptotic_reference(estimator: str, m: int) -> float:
    """Univariate asymptotic variance of the estimate: ``pi^2/(24 m)`` (XPE), ``1/(4 m)`` (LXW)."""
    if m < 1:
        raise InvalidParameterError(f"m must be positive, got {m}")
    name = estimator.upper()
    if name == "XPE":
        return math.pi ** 2 / (24.0 * m)
    if name == "LXW":
        return 1.0 / (4.0 * m)
    raise NoReferenceError(f"no asymptotic reference variance for {estimator!r}")
