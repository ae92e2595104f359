"""Fourier frequencies, transforms and (smoothed) cross-periodograms."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, InvalidLengthError, InvalidParameterError

MIN_LENGTH = 4


def as_series(values, name: str = "series") -> np.ndarray:
    """Validate a time series and return it as a float64 array."""
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1:
        raise DimensionError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if arr.size < MIN_LENGTH:
        raise InvalidLengthError(f"{name} needs at least {MIN_LENGTH} values, got {arr.size}")
    if not np.all(np.isfinite(arr)):
        raise InvalidParameterError(f"{name} contains NaN or infinite values")
    return arr


@dataclass(frozen=True)
class FrequencyGrid:
    """Positive Fourier frequencies ``2*pi*j/T`` for ``j = 1 .. T // 2``."""

    T: int
    frequencies: np.ndarray

    def __len__(self) -> int:
        return self.frequencies.size


@dataclass(frozen=True)
class CrossSpectrum:
    """Cross-periodogram values on a Fourier grid.

    ``smoothing_span`` is 0 for the raw cross-periodogram and the Daniell
    span otherwise.
    """

    grid: FrequencyGrid
    values: np.ndarray
    smoothing_span: int = 0

    def __post_init__(self):
        if self.values.shape != self.grid.frequencies.shape:
            raise DimensionError(
                f"{self.values.size} spectrum values for {len(self.grid)} frequencies"
            )

    def __len__(self) -> int:
        return self.values.size

    @property
    def frequencies(self) -> np.ndarray:
        return self.grid.frequencies

    @property
    def T(self) -> int:
        return self.grid.T

    def conj(self) -> "CrossSpectrum":
        return CrossSpectrum(self.grid, np.conj(self.values), self.smoothing_span)


def fourier_frequencies(T: int) -> FrequencyGrid:
    """Return the positive Fourier frequencies of a length-``T`` sample.

    Examples
    --------
    >>> fourier_frequencies(8).frequencies / np.pi
    array([0.25, 0.5 , 0.75, 1.  ])
    """
    T = int(T)
    if T < MIN_LENGTH:
        raise InvalidLengthError(f"T must be at least {MIN_LENGTH}, got {T}")
    j = np.arange(1, T // 2 + 1)
    freqs = 2.0 * np.pi * j / T
    freqs.setflags(write=False)
    return FrequencyGrid(T, freqs)


def discrete_fourier(x) -> np.ndarray:
    """Finite Fourier transform ``sum_{t=1}^T x_t exp(-i lambda_j t)``.

    The time index starts at one, so the result differs from a zero-based
    FFT by the phase factor ``exp(-i lambda_j)``. Only the positive
    frequencies ``j = 1 .. T // 2`` are returned.
    """
    x = as_series(x, "x")
    T = x.size
    grid = fourier_frequencies(T)
    # pocketfft is O(T log T) for every length, prime lengths included
    coeffs = np.fft.fft(x)[1 : T // 2 + 1]
    return coeffs * np.exp(-1j * grid.frequencies)


def cross_periodogram(x, y, demean: bool = True) -> CrossSpectrum:
    """Raw cross-periodogram ``w_x conj(w_y) / (2 pi T)``.

    Parameters
    ----------
    x, y : array_like
        Series of equal length ``T >= 4``.
    demean : bool
        Subtract each series' mean before transforming.

    Returns
    -------
    CrossSpectrum
        Complex values at ``lambda_j``, ``j = 1 .. T // 2``, with
        ``smoothing_span == 0``.
    """
    x = as_series(x, "x")
    y = as_series(y, "y")
    if x.size != y.size:
        raise DimensionError(f"series lengths differ: {x.size} != {y.size}")
    same = x is y or np.array_equal(x, y)
    if demean:
        x = x - x.mean()
        y = y - y.mean()
    T = x.size
    wx = discrete_fourier(x)
    if same:
        # exactly real self-spectrum
        values = (wx.real ** 2 + wx.imag ** 2) / (2.0 * np.pi * T) + 0j
    else:
        values = wx * np.conj(discrete_fourier(y)) / (2.0 * np.pi * T)
    return CrossSpectrum(fourier_frequencies(T), values, 0)


def daniell_weights(span: int) -> np.ndarray:
    """Modified Daniell kernel: flat interior, half weight at both ends."""
    w = np.full(span, 1.0 / (span - 1))
    w[0] = w[-1] = 0.5 / (span - 1)
    return w


def daniell_smooth(spectrum: CrossSpectrum, span: int) -> CrossSpectrum:
    """Smooth a cross-spectrum with a modified Daniell moving average.

    Near both ends of the frequency range the window is cut off at the
    boundary and the surviving weights are rescaled to sum to one.
    """
    n = len(spectrum)
    if span != int(span) or span < 3 or span % 2 == 0:
        raise InvalidParameterError(f"Daniell span must be an odd integer >= 3, got {span}")
    span = int(span)
    if span > n:
        raise InvalidParameterError(f"Daniell span {span} exceeds spectrum length {n}")
    w = daniell_weights(span)
    num = np.convolve(spectrum.values, w, mode="same")
    norm = np.convolve(np.ones(n), w, mode="same")
    return CrossSpectrum(spectrum.grid, num / norm, span)


def smoothed_cross_periodogram(x, y, span: int = 21, demean: bool = True) -> CrossSpectrum:
    """Cross-periodogram followed by Daniell smoothing; ``span=0`` skips smoothing."""
    raw = cross_periodogram(x, y, demean=demean)
    if not span:
        return raw
    return daniell_smooth(raw, span)
