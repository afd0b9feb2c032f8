"""Tap-weight designers for the transversal engine.

Three processing functions are covered: a Gaussian-apodized sinc bandpass
with tunable center frequency, a temporal differentiator obtained by
frequency sampling, and a Hilbert transformer. All designs are normalized
to unit peak |H| and report their achieved center/bandwidth as measured
from the realized response rather than echoing the request.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DesignInfeasibleError, ValidationError
from .transversal import TapWeights, passband_3db

_N_FFT = 1 << 18  # dense grid for normalization and measurement


@dataclass(frozen=True)
class BandpassDesign:
    """Request for a sinc bandpass: tap count, bandwidth, center, apodization.

    apodization_sigma is the Gaussian width in tap-index units; 0 disables
    apodization. Nyquist feasibility depends on the tap spacing and is
    checked at design time.
    """

    n_taps: int
    bandwidth: float         # Hz
    center_frequency: float  # Hz
    apodization_sigma: float = 0.0

    def __post_init__(self):
        if self.n_taps < 2:
            raise ValidationError(f"n_taps >= 2 required, got {self.n_taps}")
        if not math.isfinite(self.bandwidth) or self.bandwidth <= 0.0:
            raise ValidationError(f"bandwidth > 0 required, got {self.bandwidth!r}")
        if not math.isfinite(self.center_frequency) or self.center_frequency < 0.0:
            raise ValidationError(
                f"center_frequency >= 0 required, got {self.center_frequency!r}"
            )
        if not math.isfinite(self.apodization_sigma) or self.apodization_sigma < 0.0:
            raise ValidationError(
                f"apodization_sigma >= 0 required, got {self.apodization_sigma!r}"
            )


@dataclass(frozen=True)
class DesignResult:
    """Designed taps plus properties measured from the realized response."""

    taps: TapWeights
    achieved_center: float     # Hz
    achieved_bandwidth: float  # Hz
    notes: str = ""


def _dense_magnitude(coefficients: np.ndarray, n_fft: int = _N_FFT) -> np.ndarray:
    return np.abs(np.fft.fft(coefficients, n_fft))


def _normalize_unit_peak(coefficients: np.ndarray) -> np.ndarray:
    peak = _dense_magnitude(coefficients).max()
    if peak == 0.0:
        raise DesignInfeasibleError("design produced an identically zero response")
    return coefficients / peak


def _measure_passband(coefficients: np.ndarray, tap_spacing: float) -> tuple[float, float]:
    """Peak location and half-power width on a dense FFT grid over [0, 1/T)."""
    mags = _dense_magnitude(coefficients)
    n = len(mags)
    freqs = np.arange(n) / (n * tap_spacing)
    peak = int(np.argmax(mags[: n // 2 + 1]))
    f_low, f_high = passband_3db(freqs, mags, peak)
    return freqs[peak], f_high - f_low


def _raw_bandpass_coefficients(design: BandpassDesign, tap_spacing: float) -> np.ndarray:
    n = design.n_taps
    center_tap = (n - 1) / 2.0
    x = np.arange(n) - center_tap
    # sinc argument B*T*x puts the passband edges at f0 +- B/2, so the
    # requested bandwidth is the full passband width; the 2BT prefactor is
    # immaterial after unit-peak normalization.
    bt = design.bandwidth * tap_spacing
    coeffs = (
        2.0 * bt * np.sinc(bt * x)
        * np.cos(2.0 * np.pi * design.center_frequency * tap_spacing * x)
    )
    if design.apodization_sigma > 0.0:
        coeffs = coeffs * np.exp(-(x**2) / (2.0 * design.apodization_sigma**2))
    return coeffs


def sinc_bandpass_taps(design: BandpassDesign, tap_spacing: float) -> DesignResult:
    """Gaussian-apodized sinc bandpass taps.

    With c = (N-1)/2 and x_n = n - c:

        a_n = 2BT sinc(BT x_n) cos(2 pi f0 T x_n) exp(-x_n^2 / (2 sigma^2))

    where sinc(x) = sin(pi x)/(pi x) and the Gaussian factor is omitted for
    sigma = 0. B is the full passband width (edges at f0 +- B/2) and the
    cosine carrier translates the passband to f0; both B and f0 must stay
    below the Nyquist bound (1/T)/2.
    """
    if not math.isfinite(tap_spacing) or tap_spacing <= 0.0:
        raise ValidationError(f"tap_spacing > 0 required, got {tap_spacing!r}")
    nyquist = 0.5 / tap_spacing
    if design.bandwidth >= nyquist:
        raise DesignInfeasibleError(
            f"bandwidth {design.bandwidth:g} Hz exceeds the Nyquist bound "
            f"{nyquist:g} Hz for tap spacing {tap_spacing:g} s"
        )
    if design.center_frequency >= nyquist:
        raise DesignInfeasibleError(
            f"center frequency {design.center_frequency:g} Hz exceeds the Nyquist bound "
            f"{nyquist:g} Hz for tap spacing {tap_spacing:g} s"
        )
    coeffs = _normalize_unit_peak(_raw_bandpass_coefficients(design, tap_spacing))
    center, width = _measure_passband(coeffs, tap_spacing)
    notes = (
        f"sinc bandpass, n_taps={design.n_taps}, bandwidth_hz={design.bandwidth:g}, "
        f"center_hz={design.center_frequency:g}, apodization_sigma={design.apodization_sigma:g}"
    )
    return DesignResult(TapWeights(coeffs, tap_spacing), center, width, notes)


def hilbert_taps(n_taps: int, tap_spacing: float) -> DesignResult:
    """Hilbert transformer taps: a_c = 0 and a_n = 1/(pi (n - c)) for n != c.

    Requires odd n_taps so the center tap exists; the taps are antisymmetric
    about the center, which forces a -90 degree delay-compensated phase over
    the lower half-band.
    """
    if n_taps < 3 or n_taps % 2 == 0:
        raise ValidationError(
            f"n_taps must be odd and >= 3 so a center tap exists, got {n_taps}"
        )
    if not math.isfinite(tap_spacing) or tap_spacing <= 0.0:
        raise ValidationError(f"tap_spacing > 0 required, got {tap_spacing!r}")
    center = n_taps // 2
    k = np.arange(n_taps) - center
    coeffs = np.zeros(n_taps)
    nonzero = k != 0
    coeffs[nonzero] = 1.0 / (np.pi * k[nonzero])
    coeffs = _normalize_unit_peak(coeffs)
    f_center, width = _measure_passband(coeffs, tap_spacing)
    notes = f"hilbert transformer, n_taps={n_taps}"
    return DesignResult(TapWeights(coeffs, tap_spacing), f_center, width, notes)


def differentiator_taps(n_taps: int, tap_spacing: float) -> DesignResult:
    """First-order differentiator taps by frequency sampling.

    The response is pinned to H_k = j 2 pi f_k at the N DFT frequencies
    f_k in [-1/(2T), 1/(2T)), inverted to the tap domain, and circularly
    shifted to center. For even N the unpaired Nyquist bin is zeroed so the
    impulse response stays real. The taps are antisymmetric, so H(0) = 0.
    """
    if n_taps < 3:
        raise ValidationError(f"n_taps >= 3 required, got {n_taps}")
    if not math.isfinite(tap_spacing) or tap_spacing <= 0.0:
        raise ValidationError(f"tap_spacing > 0 required, got {tap_spacing!r}")
    f_k = np.fft.fftfreq(n_taps, d=tap_spacing)
    sampled = 2j * np.pi * f_k
    if n_taps % 2 == 0:
        sampled[n_taps // 2] = 0.0
    impulse = np.fft.ifft(sampled)
    residue = np.abs(impulse.imag).max()
    scale = np.abs(impulse.real).max()
    if residue > 1e-12 * scale:
        raise ValidationError(
            f"frequency sampling lost conjugate symmetry (imag residue {residue:g})"
        )
    if n_taps % 2 == 1:
        coeffs = np.roll(impulse.real, (n_taps - 1) // 2)
        coeffs = 0.5 * (coeffs - coeffs[::-1])
    else:
        coeffs = np.roll(impulse.real, n_taps // 2)
        tail = coeffs[1:]
        coeffs[1:] = 0.5 * (tail - tail[::-1])
        coeffs[0] = 0.0
    coeffs = _normalize_unit_peak(coeffs)
    f_center, width = _measure_passband(coeffs, tap_spacing)
    notes = f"frequency-sampled first-order differentiator, n_taps={n_taps}"
    return DesignResult(TapWeights(coeffs, tap_spacing), f_center, width, notes)
