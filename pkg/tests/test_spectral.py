import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from oracles import cross_periodogram_direct, daniell_direct, dft_direct
from xspectra.errors import DimensionError, InvalidLengthError, InvalidParameterError
from xspectra.spectral import (
    CrossSpectrum,
    cross_periodogram,
    daniell_smooth,
    daniell_weights,
    discrete_fourier,
    fourier_frequencies,
    smoothed_cross_periodogram,
)

finite = st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False)


def series(min_size=4, max_size=64):
    return st.integers(min_size, max_size).flatmap(
        lambda n: arrays(np.float64, n, elements=finite)
    )


class TestFourierFrequencies:
    def test_t8(self):
        g = fourier_frequencies(8)
        np.testing.assert_allclose(g.frequencies, np.pi * np.array([0.25, 0.5, 0.75, 1.0]))
        assert len(g) == 4

    def test_t9_odd(self):
        g = fourier_frequencies(9)
        assert len(g) == 4
        assert g.frequencies[-1] == pytest.approx(8 * np.pi / 9)
        assert g.frequencies[-1] < np.pi

    def test_t5000(self):
        g = fourier_frequencies(5000)
        assert len(g) == 2500
        assert g.frequencies[0] == pytest.approx(2 * np.pi / 5000)
        assert np.all(np.diff(g.frequencies) > 0)
        assert g.frequencies[-1] <= np.pi

    @pytest.mark.parametrize("T", [0, 1, 3])
    def test_too_short(self, T):
        with pytest.raises(InvalidLengthError):
            fourier_frequencies(T)


class TestDiscreteFourier:
    def test_constant_vanishes(self):
        c = 3.7
        w = discrete_fourier(np.full(100, c))
        assert np.max(np.abs(w)) <= 1e-10 * 100 * c

    def test_unit_impulse_phase(self):
        # t is 1-based: exp(-i * pi/2 * 1) = -i
        w = discrete_fourier([1.0, 0.0, 0.0, 0.0])
        assert w[0] == pytest.approx(-1j, abs=1e-15)

    @pytest.mark.parametrize("T", [4, 5, 17, 31, 64])
    def test_matches_direct_sum(self, rng, T):
        x = rng.standard_normal(T)
        np.testing.assert_allclose(discrete_fourier(x), dft_direct(x), rtol=0, atol=1e-10)

    def test_rejects_nan(self):
        with pytest.raises(InvalidParameterError):
            discrete_fourier([1.0, np.nan, 0.0, 2.0])


class TestCrossPeriodogram:
    def test_matches_direct(self, rng):
        x, y = rng.standard_normal((2, 32))
        np.testing.assert_allclose(
            cross_periodogram(x, y).values, cross_periodogram_direct(x, y), rtol=0, atol=1e-10
        )

    def test_self_spectrum_is_periodogram(self, rng):
        x = rng.standard_normal(50)
        I = cross_periodogram(x, x).values
        w = discrete_fourier(x - x.mean())
        np.testing.assert_allclose(I.real, np.abs(w) ** 2 / (2 * np.pi * 50), rtol=1e-12)
        assert np.all(I.imag == 0)
        assert np.all(I.real >= 0)

    def test_conjugate_swap(self, rng):
        x, y = rng.standard_normal((2, 40))
        np.testing.assert_allclose(cross_periodogram(y, x).values,
                                   np.conj(cross_periodogram(x, y).values), rtol=1e-12)

    def test_length_mismatch(self):
        with pytest.raises(DimensionError):
            cross_periodogram(np.ones(8), np.ones(9))

    def test_demean_flag(self, rng):
        # nonzero frequencies are orthogonal to the mean, so demeaning changes nothing
        x, y = rng.standard_normal((2, 30)) + 5.0
        a = cross_periodogram(x, y, demean=True).values
        b = cross_periodogram(x, y, demean=False).values
        np.testing.assert_allclose(a, b, atol=1e-10)

    @settings(max_examples=60, deadline=None)
    @given(series(), st.data())
    def test_oracle_equivalence_property(self, x, data):
        y = data.draw(arrays(np.float64, x.size, elements=finite))
        scale = 1.0 + np.max(np.abs(x)) * np.max(np.abs(y)) * x.size / (2 * np.pi)
        np.testing.assert_allclose(
            cross_periodogram(x, y).values, cross_periodogram_direct(x, y),
            rtol=0, atol=1e-10 * scale,
        )

    @settings(max_examples=60, deadline=None)
    @given(series(), st.data())
    def test_conjugate_antisymmetry_property(self, x, data):
        y = data.draw(arrays(np.float64, x.size, elements=finite))
        a = cross_periodogram(x, y).values
        b = cross_periodogram(y, x).values
        np.testing.assert_allclose(a, np.conj(b), rtol=1e-12, atol=1e-300)

    @settings(max_examples=60, deadline=None)
    @given(series())
    def test_self_spectrum_positivity_property(self, x):
        I = cross_periodogram(x, x).values
        scale = 1.0 + np.max(np.abs(I.real))
        assert np.all(np.abs(I.imag) <= 1e-12 * (np.abs(I.real) + 1))
        assert np.all(I.real >= -1e-12 * scale)

    @settings(max_examples=40, deadline=None)
    @given(series(8, 48), st.floats(-50, 50), st.floats(-50, 50), st.data())
    def test_bilinear_scaling_property(self, x, a, b, data):
        y = data.draw(arrays(np.float64, x.size, elements=finite))
        base = cross_periodogram(x, y).values
        scaled = cross_periodogram(a * x, b * y).values
        tol = 1e-9 * (1 + abs(a * b) * np.max(np.abs(base)))
        np.testing.assert_allclose(scaled, a * b * base, rtol=1e-9, atol=tol)


def _spectrum(values, T=None):
    values = np.asarray(values, dtype=complex)
    T = T or 2 * values.size
    return CrossSpectrum(fourier_frequencies(T), values)


class TestDaniell:
    def test_weights(self):
        w = daniell_weights(5)
        np.testing.assert_allclose(w, [1 / 8, 1 / 4, 1 / 4, 1 / 4, 1 / 8])
        assert w.sum() == pytest.approx(1.0)

    @pytest.mark.parametrize("span", [3, 5, 21])
    def test_constant_unchanged(self, span):
        c = 2.5 - 1.5j
        out = daniell_smooth(_spectrum(np.full(40, c)), span)
        np.testing.assert_allclose(out.values, c, rtol=1e-14)
        assert out.smoothing_span == span

    def test_span3_interior(self, rng):
        v = rng.standard_normal(20) + 1j * rng.standard_normal(20)
        out = daniell_smooth(_spectrum(v), 3).values
        j = 7
        assert out[j] == pytest.approx(v[j - 1] / 4 + v[j] / 2 + v[j + 1] / 4, rel=1e-14)

    def test_span3_edge_renormalised(self):
        v = np.array([4.0, 8.0, 0.0, 0.0])
        out = daniell_smooth(_spectrum(v), 3).values
        # weights (1/2, 1/4) over the surviving points, renormalised by 3/4
        assert out[0] == pytest.approx((4.0 / 2 + 8.0 / 4) / 0.75)

    def test_span21_matches_direct_window(self, rng):
        v = rng.standard_normal(2500) + 1j * rng.standard_normal(2500)
        out = daniell_smooth(_spectrum(v), 21).values
        np.testing.assert_allclose(out, daniell_direct(v, 21), rtol=0, atol=1e-12)

    @pytest.mark.parametrize("span", [0, 1, 2, 4, 22])
    def test_bad_span(self, span):
        with pytest.raises(InvalidParameterError):
            daniell_smooth(_spectrum(np.ones(30)), span)

    def test_span_longer_than_spectrum(self):
        with pytest.raises(InvalidParameterError):
            daniell_smooth(_spectrum(np.ones(10)), 11)

    @settings(max_examples=50, deadline=None)
    @given(arrays(np.float64, st.integers(30, 120), elements=finite), st.sampled_from([3, 5, 7, 9]))
    def test_interior_mean_preserved(self, v, span):
        # sum of interior outputs equals a weighted sum where every raw value
        # at distance >= span from both ends gets total weight one
        h = span // 2
        out = daniell_smooth(_spectrum(v.astype(complex)), span).values.real
        n = v.size
        inner = slice(h, n - h)
        w = daniell_weights(span)
        per_point = np.convolve(np.ones(n - 2 * h), w, mode="full")
        expected = np.dot(per_point, v)
        assert out[inner].sum() == pytest.approx(expected, rel=1e-9, abs=1e-9 * (1 + np.abs(v).sum()))
        core = slice(span, n - span)
        assert np.all(np.isclose(per_point[core], 1.0))

    def test_smoothed_wrapper(self, rng):
        x, y = rng.standard_normal((2, 200))
        raw = cross_periodogram(x, y)
        assert smoothed_cross_periodogram(x, y, span=0).smoothing_span == 0
        np.testing.assert_allclose(smoothed_cross_periodogram(x, y, span=5).values,
                                   daniell_smooth(raw, 5).values)
