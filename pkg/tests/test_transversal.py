"""Broadcast-delay-sum engine tests against FFT and closed-form oracles."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from combrf import (
    BandwidthUnresolvedError,
    DegenerateDelayError,
    DispersionLink,
    RfResponse,
    SampleAlignmentError,
    TapWeights,
    ValidationError,
    Waveform,
    apply_to_waveform,
    q_rf,
    rf_fsr,
    sidelobe_level,
    tap_spacing,
    transfer_function,
)

T0 = 26.70e-12  # 17 ps/nm/km x 4 km x 0.3926 nm


def fft_oracle(coeffs, spacing, n_fft=1 << 20):
    """Zero-padded FFT evaluation of the tap response, independent of Horner."""
    mags = np.abs(np.fft.fft(coeffs, n_fft))
    freqs = np.arange(n_fft) / (n_fft * spacing)
    return freqs, mags


def oracle_halfpower_width(coeffs, spacing, n_fft=1 << 20):
    """Half-power full width of the lobe at f = 0, from the dense FFT."""
    freqs, mags = fft_oracle(coeffs, spacing, n_fft)
    threshold = mags[0] / math.sqrt(2.0)
    j = 0
    while mags[j] >= threshold:
        j += 1
    frac = (threshold - mags[j]) / (mags[j - 1] - mags[j])
    right = freqs[j] - frac * (freqs[j] - freqs[j - 1])
    return 2.0 * right


class TestTapSpacing:
    def test_dimensional_product(self):
        link = DispersionLink(17.0, 4.0)
        spacing = tap_spacing(link, 0.3926e-9)
        # oracle: accumulate the per-km delay increments
        per_km = tap_spacing(DispersionLink(17.0, 1.0), 0.3926e-9)
        assert spacing == pytest.approx(4 * per_km, rel=1e-12)
        assert spacing == pytest.approx(26.70e-12, rel=1e-3)

    def test_zero_length_is_degenerate(self):
        with pytest.raises(DegenerateDelayError):
            tap_spacing(DispersionLink(17.0, 0.0), 0.3926e-9)
        with pytest.raises(DegenerateDelayError):
            tap_spacing(DispersionLink(0.0, 4.0), 0.3926e-9)

    def test_negative_dispersion_flips_sign(self):
        plus = tap_spacing(DispersionLink(17.0, 4.0), 0.3926e-9)
        minus = tap_spacing(DispersionLink(-17.0, 4.0), 0.3926e-9)
        assert minus == -plus

    def test_rejects_nonpositive_channel_spacing(self):
        with pytest.raises(ValidationError):
            tap_spacing(DispersionLink(17.0, 4.0), 0.0)


class TestTransferFunction:
    def test_single_tap_all_pass(self):
        taps = TapWeights(np.array([1.0]), T0)
        resp = transfer_function(taps, np.linspace(0, 30e9, 100))
        np.testing.assert_allclose(resp.values, 1.0)

    def test_two_tap_cosine_null(self):
        taps = TapWeights(np.array([1.0, 1.0]), T0)
        resp = transfer_function(taps, np.array([0.0, 1.0 / (2 * T0)]))
        assert abs(resp.values[0]) == pytest.approx(2.0, abs=1e-12)
        assert abs(resp.values[1]) == pytest.approx(0.0, abs=1e-9)

    def test_uniform_80_mainlobe_and_sidelobe(self):
        coeffs = np.ones(80)
        width = oracle_halfpower_width(coeffs, T0)
        assert width == pytest.approx(0.886 / (80 * T0), rel=2e-3)
        assert width == pytest.approx(0.415e9, rel=2e-3)
        n = 1 << 16
        resp = transfer_function(TapWeights(coeffs, T0), np.arange(n) / (n * T0))
        # Dirichlet-kernel oracle: the first sidelobe lies between the first
        # two nulls, N psi / 2 in (pi, 2 pi)
        psi = np.linspace(2.02 * np.pi / 80, 3.98 * np.pi / 80, 20001)
        dirichlet = np.abs(np.sin(80 * psi / 2) / (80 * np.sin(psi / 2)))
        first_lobe_db = 20 * np.log10(dirichlet.max())
        assert sidelobe_level(resp) == pytest.approx(first_lobe_db, abs=0.05)
        assert sidelobe_level(resp) == pytest.approx(-13.3, abs=0.1)

    def test_matches_fft_oracle_on_fft_grid(self):
        rng = np.random.default_rng(2)
        coeffs = rng.standard_normal(33)
        taps = TapWeights(coeffs, T0)
        n = 4096
        freqs = np.arange(n) / (n * T0)
        resp = transfer_function(taps, freqs)
        oracle = np.fft.fft(coeffs, n)
        np.testing.assert_allclose(resp.values, oracle, atol=1e-10 * np.abs(oracle).max())


class TestRfFsr:
    def test_reciprocal_anchor(self):
        assert rf_fsr(TapWeights(np.ones(3), 26.70e-12)) == pytest.approx(37.45e9, rel=1e-3)
        assert rf_fsr(TapWeights(np.ones(3), 1 / 49e9)) == pytest.approx(49e9, rel=1e-12)

    def test_periodicity_located_numerically(self):
        # oracle: distance between response maxima equals 1/T
        taps = TapWeights(np.ones(16), T0)
        n = 1 << 18
        freqs = np.arange(n) * 3.0 / (n * T0)  # three periods
        mags = np.abs(transfer_function(taps, freqs).values)
        peaks = np.nonzero((mags > 15.9))[0]  # near the N=16 peak
        groups = np.split(peaks, np.nonzero(np.diff(peaks) > 10)[0] + 1)
        groups = [g for g in groups if g[-1] < n - 1]  # drop the clipped edge image
        centers = [freqs[g[np.argmax(mags[g])]] for g in groups]
        assert len(centers) == 3
        assert np.diff(centers) == pytest.approx(rf_fsr(taps), rel=1e-4)

    def test_scaling_law(self):
        base = rf_fsr(TapWeights(np.ones(2), T0))
        assert rf_fsr(TapWeights(np.ones(2), 2 * T0)) == pytest.approx(base / 2, rel=1e-12)


class TestQrf:
    @pytest.mark.parametrize("n_taps, expected", [(80, 90.3), (20, 22.6)])
    def test_uniform_taps_match_oracle(self, n_taps, expected):
        taps = TapWeights(np.ones(n_taps), T0)
        n = 1 << 18
        grid = (np.arange(n) - n // 2) / (n * T0)
        resp = transfer_function(taps, grid)
        q = q_rf(resp, 0.0, fsr=rf_fsr(taps))
        oracle_q = rf_fsr(taps) / oracle_halfpower_width(np.ones(n_taps), T0)
        assert q == pytest.approx(oracle_q, rel=1e-3)
        assert q == pytest.approx(expected, rel=5e-3)

    def test_ratio_80_over_20(self):
        qs = {}
        for n_taps in (20, 80):
            taps = TapWeights(np.ones(n_taps), T0)
            n = 1 << 18
            grid = (np.arange(n) - n // 2) / (n * T0)
            qs[n_taps] = q_rf(transfer_function(taps, grid), 0.0, fsr=rf_fsr(taps))
        assert qs[80] / qs[20] == pytest.approx(4.0, abs=0.02)

    def test_flat_response_unresolved(self):
        taps = TapWeights(np.array([1.0]), T0)
        grid = np.linspace(-10e9, 10e9, 1001)
        with pytest.raises(BandwidthUnresolvedError):
            q_rf(transfer_function(taps, grid), 0.0, fsr=rf_fsr(taps))

    def test_center_convention_needs_no_fsr(self):
        taps = TapWeights(np.ones(40), T0)
        n = 1 << 16
        grid = np.arange(1, n) * 1.5 / (n * T0)  # span 1.5 periods
        resp = transfer_function(taps, grid)
        center = rf_fsr(taps)  # passband image at 1/T, interior to the grid
        q = q_rf(resp, center, convention="center")
        assert q == pytest.approx(center / oracle_halfpower_width(np.ones(40), T0), rel=1e-2)
        with pytest.raises(ValidationError):
            q_rf(resp, center, convention="fsr")


class TestApplyToWaveform:
    def test_identity(self):
        taps = TapWeights(np.array([1.0]), 1e-9)
        wave = Waveform(1e9, np.sin(np.linspace(0, 7, 50)))
        out = apply_to_waveform(taps, wave)
        np.testing.assert_array_equal(out.samples, wave.samples)

    def test_two_tap_differencer_on_step(self):
        taps = TapWeights(np.array([1.0, -1.0]), 1e-9)
        step = np.zeros(16)
        step[8:] = 1.0
        out = apply_to_waveform(taps, Waveform(1e9, step))
        assert len(out) == 17
        assert out.samples[8] == 1.0
        # single impulse at the step inside the input span; the trailing -1
        # is the zero-padded end of the finite record
        np.testing.assert_array_equal(out.samples[:8], 0.0)
        np.testing.assert_array_equal(out.samples[9:16], 0.0)
        assert out.samples[16] == -1.0

    def test_multi_sample_tap_delay(self):
        taps = TapWeights(np.array([0.5, 0.25]), 4e-9)
        wave = Waveform(1e9, np.array([1.0, 0.0, 0.0, 0.0, 0.0]))
        out = apply_to_waveform(taps, wave)
        expected = np.zeros(9)
        expected[0] = 0.5
        expected[4] = 0.25
        np.testing.assert_array_equal(out.samples, expected)

    def test_misaligned_rate_raises_with_guidance(self):
        taps = TapWeights(np.array([1.0, 1.0]), 1e-9)
        with pytest.raises(SampleAlignmentError, match="resample"):
            apply_to_waveform(taps, Waveform(1.5e9, np.ones(8)))
        with pytest.raises(SampleAlignmentError):
            apply_to_waveform(taps, Waveform(0.3e9, np.ones(8)))  # under one sample per tap


class TestSidelobeLevel:
    def test_gaussian_apodized_uniform(self):
        x = np.arange(80) - 39.5
        coeffs = np.exp(-(x**2) / (2 * (80 / 6) ** 2))
        n = 1 << 16
        resp = transfer_function(TapWeights(coeffs, T0), np.arange(n) / (n * T0))
        level = sidelobe_level(resp)
        freqs, mags = fft_oracle(coeffs, T0, 1 << 18)
        assert level <= -30.0
        assert level == pytest.approx(-56.0, abs=0.5)

    def test_two_tap_marker(self):
        taps = TapWeights(np.ones(2), T0)
        n = 1 << 14
        resp = transfer_function(taps, np.arange(n) / (n * T0))
        assert sidelobe_level(resp) == -math.inf

    def test_flat_response_marker(self):
        resp = RfResponse(np.linspace(0, 1e9, 64), np.ones(64, dtype=complex))
        assert sidelobe_level(resp) == -math.inf


class TestProperties:
    @given(
        st.integers(min_value=1, max_value=24),
        st.floats(min_value=-3.0, max_value=3.0, allow_nan=False),
        st.floats(min_value=-3.0, max_value=3.0, allow_nan=False),
        st.integers(min_value=0, max_value=2**31 - 1),
    )
    @settings(max_examples=40, deadline=None)
    def test_linearity(self, n_taps, a, b, seed):
        rng = np.random.default_rng(seed)
        w1 = rng.standard_normal(n_taps)
        w2 = rng.standard_normal(n_taps)
        freqs = np.linspace(0, 1 / T0, 64)
        h1 = transfer_function(TapWeights(w1, T0), freqs).values
        h2 = transfer_function(TapWeights(w2, T0), freqs).values
        combined = a * w1 + b * w2
        if np.all(np.abs(combined) < 1e-300):
            return
        h = transfer_function(TapWeights(combined, T0), freqs).values
        scale = max(np.abs(h).max(), abs(a) * np.abs(h1).max() + abs(b) * np.abs(h2).max(), 1e-30)
        assert np.abs(h - (a * h1 + b * h2)).max() <= 1e-12 * scale

    @given(st.integers(min_value=1, max_value=32), st.integers(min_value=0, max_value=2**31 - 1))
    @settings(max_examples=30, deadline=None)
    def test_periodicity(self, n_taps, seed):
        rng = np.random.default_rng(seed)
        coeffs = rng.standard_normal(n_taps)
        taps = TapWeights(coeffs, T0)
        freqs = np.linspace(0.1e9, 20e9, 97)
        base = np.abs(transfer_function(taps, freqs).values)
        shifted = np.abs(transfer_function(taps, freqs + 1 / T0).values)
        scale = max(base.max(), 1e-30)
        assert np.abs(shifted - base).max() <= 1e-9 * scale

    def test_conjugate_symmetry_exact(self):
        rng = np.random.default_rng(5)
        coeffs = rng.standard_normal(17)
        taps = TapWeights(coeffs, T0)
        freqs = np.linspace(1e8, 30e9, 301)
        plus = transfer_function(taps, freqs).values
        minus = transfer_function(taps, -freqs[::-1]).values[::-1]
        assert np.array_equal(minus, np.conj(plus))

    def test_time_frequency_consistency(self):
        rng = np.random.default_rng(9)
        for _ in range(20):
            n_taps = int(rng.integers(2, 129))
            k = int(rng.integers(1, 4))
            spacing = float(rng.uniform(5e-12, 50e-12))
            taps = TapWeights(rng.standard_normal(n_taps), spacing)
            impulse = Waveform(k / spacing, np.array([1.0]))
            h_time = apply_to_waveform(taps, impulse).samples
            m = 1 << 11
            dft = np.fft.fft(h_time, m)
            freqs = np.arange(m) * (k / spacing) / m
            direct = transfer_function(taps, freqs).values
            scale = np.abs(direct).max()
            assert np.abs(dft - direct).max() <= 1e-9 * scale

    def test_q_rf_proportional_to_tap_count(self):
        values = {}
        for n_taps in (10, 20, 40, 80):
            taps = TapWeights(np.ones(n_taps), T0)
            n = 1 << 18
            grid = (np.arange(n) - n // 2) / (n * T0)
            values[n_taps] = q_rf(transfer_function(taps, grid), 0.0, fsr=rf_fsr(taps)) / n_taps
        ratios = np.array(list(values.values()))
        assert ratios.max() / ratios.min() - 1 < 0.02


class TestTypes:
    def test_tap_weights_invariants(self):
        with pytest.raises(ValidationError):
            TapWeights(np.array([]), T0)
        with pytest.raises(ValidationError):
            TapWeights(np.array([1.0]), 0.0)
        with pytest.raises(ValidationError):
            TapWeights(np.array([np.inf]), T0)
        taps = TapWeights(np.array([1.0, 2.0]), T0)
        with pytest.raises(ValueError):
            taps.coefficients[0] = 5.0  # frozen buffer

    def test_tap_weights_json_round_trip(self):
        taps = TapWeights(np.array([0.25, -0.5, 1.0]), T0)
        back = TapWeights.from_json_dict(taps.to_json_dict())
        assert back.tap_spacing == taps.tap_spacing
        np.testing.assert_array_equal(back.coefficients, taps.coefficients)

    def test_response_grid_must_increase(self):
        with pytest.raises(ValidationError):
            RfResponse(np.array([0.0, 0.0]), np.array([1.0, 1.0], dtype=complex))
