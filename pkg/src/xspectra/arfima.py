"""Simulation of correlated and mixed-correlated ARFIMA(0, d, 0) pairs.

Both families are built from the truncated moving-average representation
``x_t = sum_n a_n(d) eps_{t-n}`` with ``a_n(d) = Gamma(n+d) / (Gamma(n+1) Gamma(d))``.
A burn-in prefix absorbs the start-up transient of the truncation.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.signal import fftconvolve

from .errors import InvalidParameterError
from .spectral import MIN_LENGTH

DEFAULT_BURN_IN = 2000
# below this length the direct sum is cheaper than the transform
_DIRECT_CONV_MAX = 64


@dataclass(frozen=True)
class FracCoeffs:
    d: float
    coefficients: np.ndarray

    @property
    def n_max(self) -> int:
        return self.coefficients.size - 1


def frac_coeffs(d: float, n_max: int) -> FracCoeffs:
    """MA(inf) weights of ``(1 - B)^{-d}`` up to lag ``n_max``.

    Uses ``a_0 = 1``, ``a_n = a_{n-1} (n - 1 + d) / n``, which avoids the
    overflow of evaluating the gamma ratio directly.
    """
    if not -0.5 < d < 0.5:
        raise InvalidParameterError(f"d must lie in (-0.5, 0.5), got {d}")
    if n_max < 0:
        raise InvalidParameterError(f"n_max must be nonnegative, got {n_max}")
    n = np.arange(1, int(n_max) + 1, dtype=float)
    a = np.empty(int(n_max) + 1)
    a[0] = 1.0
    a[1:] = np.cumprod((n - 1.0 + d) / n)
    a.setflags(write=False)
    return FracCoeffs(float(d), a)


def _check_rng_seed(seed):
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def correlated_normals(rho: float, n: int, seed) -> tuple[np.ndarray, np.ndarray]:
    """Two standard-normal streams with contemporaneous correlation ``rho``.

    ``nu = rho * eps + sqrt(1 - rho^2) * eta`` with ``eta`` independent of
    ``eps``; at ``rho = +-1`` the streams coincide up to sign.
    """
    if not -1.0 <= rho <= 1.0:
        raise InvalidParameterError(f"rho must lie in [-1, 1], got {rho}")
    rng = _check_rng_seed(seed)
    z = rng.standard_normal((2, int(n)))
    eps = z[0]
    if abs(rho) == 1.0:
        return eps, rho * eps
    return eps, rho * eps + np.sqrt(1.0 - rho * rho) * z[1]


def fractional_filter(innovations, coeffs: FracCoeffs) -> np.ndarray:
    """Causal convolution ``out_t = sum_{n<=t} a_n u_{t-n}``, zero before the start."""
    u = np.asarray(innovations, dtype=float)
    N = u.size
    if coeffs.n_max < N - 1:
        raise InvalidParameterError(
            f"need coefficients up to lag {N - 1}, have {coeffs.n_max}"
        )
    a = coeffs.coefficients[:N]
    if N <= _DIRECT_CONV_MAX:
        return np.convolve(u, a)[:N]
    return fftconvolve(u, a)[:N]


@dataclass(frozen=True)
class ArfimaSpec:
    """Correlated ARFIMA(0, d, 0) pair driven by innovations with correlation ``rho``."""

    d1: float = 0.4
    d2: float = 0.4
    rho: float = 0.8
    T: int = 5000
    burn_in: int = DEFAULT_BURN_IN
    sigma_eps: float = 1.0
    sigma_nu: float = 1.0

    def __post_init__(self):
        for name in ("d1", "d2"):
            d = getattr(self, name)
            if not -0.5 < d < 0.5:
                raise InvalidParameterError(f"{name} must lie in (-0.5, 0.5), got {d}")
        if not -1.0 <= self.rho <= 1.0:
            raise InvalidParameterError(f"rho must lie in [-1, 1], got {self.rho}")
        if self.T < MIN_LENGTH:
            raise InvalidParameterError(f"T must be at least {MIN_LENGTH}, got {self.T}")
        if self.burn_in < 0:
            raise InvalidParameterError(f"burn_in must be nonnegative, got {self.burn_in}")
        if self.sigma_eps <= 0 or self.sigma_nu <= 0:
            raise InvalidParameterError("innovation standard deviations must be positive")


def _default_mc_corr() -> np.ndarray:
    return np.eye(4)


@dataclass(frozen=True)
class McArfimaSpec:
    """Mixed-correlated ARFIMA pair.

    ``x = F(d1) e1 + F(d2) e2`` and ``y = F(d3) e3 + F(d4) e4`` where the four
    unit-variance innovation streams share the correlation matrix ``corr``.
    """

    d1: float = 0.4
    d2: float = 0.2
    d3: float = 0.2
    d4: float = 0.4
    corr: np.ndarray = field(default_factory=_default_mc_corr)
    T: int = 5000
    burn_in: int = DEFAULT_BURN_IN

    def __post_init__(self):
        for name in ("d1", "d2", "d3", "d4"):
            d = getattr(self, name)
            if not -0.5 < d < 0.5:
                raise InvalidParameterError(f"{name} must lie in (-0.5, 0.5), got {d}")
        corr = np.array(self.corr, dtype=float)
        if corr.shape != (4, 4):
            raise InvalidParameterError(f"corr must be 4x4, got shape {corr.shape}")
        if not np.allclose(corr, corr.T, atol=0.0, rtol=0.0):
            raise InvalidParameterError("corr must be symmetric")
        if not np.all(np.diag(corr) == 1.0):
            raise InvalidParameterError("corr must have a unit diagonal")
        if np.any(np.abs(corr) > 1.0):
            raise InvalidParameterError("correlations must lie in [-1, 1]")
        if np.linalg.eigvalsh(corr).min() < -1e-10:
            raise InvalidParameterError("corr is not positive semidefinite")
        corr.setflags(write=False)
        object.__setattr__(self, "corr", corr)
        if self.T < MIN_LENGTH:
            raise InvalidParameterError(f"T must be at least {MIN_LENGTH}, got {self.T}")
        if self.burn_in < 0:
            raise InvalidParameterError(f"burn_in must be nonnegative, got {self.burn_in}")

    @classmethod
    def study_family(cls, rho: float, T: int = 5000, burn_in: int = DEFAULT_BURN_IN,
                     d1=0.4, d2=0.2, d3=0.2, d4=0.4) -> "McArfimaSpec":
        """Default study layout: only the (e2, e3) pair is correlated."""
        corr = np.eye(4)
        corr[1, 2] = corr[2, 1] = rho
        return cls(d1, d2, d3, d4, corr, T, burn_in)


def psd_cholesky(corr: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Lower-triangular ``L`` with ``L @ L.T == corr`` for a PSD matrix.

    Zero pivots (singular correlation structures) get a zero column instead
    of failing, so perfectly correlated streams come out bit-identical.
    """
    a = np.asarray(corr, dtype=float)
    n = a.shape[0]
    L = np.zeros_like(a)
    for j in range(n):
        pivot = a[j, j] - L[j, :j] @ L[j, :j]
        if pivot < -1e-10:
            raise InvalidParameterError("matrix is not positive semidefinite")
        if pivot <= tol:
            continue
        L[j, j] = np.sqrt(pivot)
        for i in range(j + 1, n):
            L[i, j] = (a[i, j] - L[i, :j] @ L[j, :j]) / L[j, j]
    return L


def correlated_streams(corr: np.ndarray, n: int, seed) -> np.ndarray:
    """Draw ``k`` standard-normal streams of length ``n`` with correlation ``corr``."""
    rng = _check_rng_seed(seed)
    L = psd_cholesky(corr)
    z = rng.standard_normal((L.shape[0], int(n)))
    return L @ z


def simulate_correlated_arfima(spec: ArfimaSpec, seed) -> tuple[np.ndarray, np.ndarray]:
    """Simulate one correlated ARFIMA pair of length ``spec.T``."""
    N = spec.T + spec.burn_in
    eps, nu = correlated_normals(spec.rho, N, seed)
    x = fractional_filter(spec.sigma_eps * eps, frac_coeffs(spec.d1, N - 1))
    y = fractional_filter(spec.sigma_nu * nu, frac_coeffs(spec.d2, N - 1))
    return x[spec.burn_in:], y[spec.burn_in:]


def simulate_mc_arfima(spec: McArfimaSpec, seed) -> tuple[np.ndarray, np.ndarray]:
    """Simulate one mixed-correlated ARFIMA pair of length ``spec.T``."""
    N = spec.T + spec.burn_in
    e = correlated_streams(spec.corr, N, seed)
    cache: dict[float, FracCoeffs] = {}

    def filt(d, u):
        if d not in cache:
            cache[d] = frac_coeffs(d, N - 1)
        return fractional_filter(u, cache[d])

    x = filt(spec.d1, e[0]) + filt(spec.d2, e[1])
    y = filt(spec.d3, e[2]) + filt(spec.d4, e[3])
    return x[spec.burn_in:], y[spec.burn_in:]
