"""Broadcast-delay-sum engine.

One RF input is broadcast onto N wavelength channels, each channel is
delayed by n*T through a dispersive link, and photodetection sums the
delayed replicas. The result is an FIR response

    H(f) = sum_{n=0}^{N-1} a_n * exp(-j 2 pi f n T)

with tap coefficients a_n set by the shaped comb line powers and tap
spacing T = D * L * delta_lambda from second-order dispersion.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    BandwidthUnresolvedError,
    DegenerateDelayError,
    SampleAlignmentError,
    ValidationError,
)
from .sigio import Waveform


@dataclass(frozen=True)
class TapWeights:
    """Signed FIR tap coefficients with inter-tap delay T (seconds).

    Negative coefficients model balanced detection and are allowed.
    """

    coefficients: np.ndarray
    tap_spacing: float  # seconds

    def __post_init__(self):
        coeffs = np.asarray(self.coefficients, dtype=float)
        if coeffs.ndim != 1 or len(coeffs) < 1:
            raise ValidationError("coefficients must be a 1-D vector with at least 1 entry")
        if not np.all(np.isfinite(coeffs)):
            raise ValidationError("coefficients must all be finite")
        if not math.isfinite(self.tap_spacing) or self.tap_spacing <= 0.0:
            raise ValidationError(f"tap_spacing > 0 required, got {self.tap_spacing!r}")
        coeffs = coeffs.copy()
        coeffs.flags.writeable = False
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def n_taps(self) -> int:
        return len(self.coefficients)

    def to_json_dict(self) -> dict:
        return {
            "tap_spacing_s": self.tap_spacing,
            "coefficients": [float(a) for a in self.coefficients],
        }

    @classmethod
    def from_json_dict(cls, doc: dict) -> "TapWeights":
        unknown = set(doc) - {"tap_spacing_s", "coefficients"}
        if unknown:
            raise ValidationError(f"unknown tap fields: {sorted(unknown)}")
        if "tap_spacing_s" not in doc or "coefficients" not in doc:
            raise ValidationError("tap document requires tap_spacing_s and coefficients")
        return cls(np.asarray(doc["coefficients"], dtype=float), float(doc["tap_spacing_s"]))


@dataclass(frozen=True)
class DispersionLink:
    """Dispersive delay line: D in ps/(nm km), length in km. Sign of D allowed."""

    dispersion: float  # ps/(nm km)
    length: float      # km

    def __post_init__(self):
        if not math.isfinite(self.dispersion):
            raise ValidationError("dispersion must be finite")
        if not math.isfinite(self.length) or self.length < 0.0:
            raise ValidationError(f"length >= 0 required, got {self.length!r}")


@dataclass(frozen=True)
class RfResponse:
    """Complex transfer values on a strictly increasing frequency grid."""

    frequencies: np.ndarray  # Hz
    values: np.ndarray       # complex

    def __post_init__(self):
        freqs = np.asarray(self.frequencies, dtype=float)
        values = np.asarray(self.values, dtype=complex)
        if freqs.ndim != 1 or values.ndim != 1:
            raise ValidationError("response arrays must be 1-D")
        if len(freqs) != len(values):
            raise ValidationError(
                f"frequency/value length mismatch: {len(freqs)} vs {len(values)}"
            )
        if len(freqs) < 1:
            raise ValidationError("response must contain at least one point")
        if not np.all(np.diff(freqs) > 0.0):
            raise ValidationError("frequency grid must be strictly increasing")
        freqs = freqs.copy()
        values = values.copy()
        freqs.flags.writeable = False
        values.flags.writeable = False
        object.__setattr__(self, "frequencies", freqs)
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return len(self.frequencies)

    @property
    def magnitude(self) -> np.ndarray:
        return np.abs(self.values)

    @property
    def magnitude_db(self) -> np.ndarray:
        with np.errstate(divide="ignore"):
            return 20.0 * np.log10(np.abs(self.values))

    @property
    def phase_deg(self) -> np.ndarray:
        return np.degrees(np.angle(self.values))


def tap_spacing(link: DispersionLink, channel_spacing: float) -> float:
    """Inter-tap delay T = D * L * delta_lambda, in seconds.

    channel_spacing is the wavelength spacing in meters. The sign follows
    the dispersion sign; a negative T means the tap order is reversed.
    """
    if not math.isfinite(channel_spacing) or channel_spacing <= 0.0:
        raise ValidationError(f"channel_spacing > 0 required, got {channel_spacing!r}")
    delay_ps = link.dispersion * link.length * (channel_spacing * 1e9)
    delay = delay_ps * 1e-12
    if delay == 0.0:
        raise DegenerateDelayError(
            f"dispersion {link.dispersion} ps/nm/km over {link.length} km gives zero tap "
            "delay; a transversal filter needs distinct tap delays"
        )
    return delay


def transfer_function(taps: TapWeights, frequencies) -> RfResponse:
    """Evaluate H(f) = sum_n a_n exp(-j 2 pi f n T) on the given grid."""
    freqs = np.asarray(frequencies, dtype=float)
    z = np.exp(-2j * np.pi * freqs * taps.tap_spacing)
    coeffs = taps.coefficients
    values = np.full(freqs.shape, complex(coeffs[-1]), dtype=complex)
    for a in coeffs[-2::-1]:
        values = values * z + a
    return RfResponse(freqs, values)


def rf_fsr(taps: TapWeights) -> float:
    """Period of H(f) in Hz: the RF free spectral range 1/|T|."""
    return 1.0 / abs(taps.tap_spacing)


def _climb_to_peak(magnitude: np.ndarray, start: int) -> int:
    i = start
    n = len(magnitude)
    while True:
        if i + 1 < n and magnitude[i + 1] > magnitude[i]:
            i += 1
        elif i - 1 >= 0 and magnitude[i - 1] > magnitude[i]:
            i -= 1
        else:
            return i


def passband_3db(
    frequencies: np.ndarray, magnitude: np.ndarray, peak_index: int
) -> tuple[float, float]:
    """Half-power crossings bracketing the peak, linearly interpolated.

    Raises BandwidthUnresolvedError if either crossing lies outside the grid.
    """
    threshold = magnitude[peak_index] / math.sqrt(2.0)
    i = peak_index
    while i > 0 and magnitude[i] >= threshold:
        i -= 1
    if magnitude[i] >= threshold:
        raise BandwidthUnresolvedError(
            "no -3 dB crossing below the passband peak inside the frequency grid"
        )
    frac = (threshold - magnitude[i]) / (magnitude[i + 1] - magnitude[i])
    f_low = frequencies[i] + frac * (frequencies[i + 1] - frequencies[i])
    j = peak_index
    n = len(magnitude)
    while j < n - 1 and magnitude[j] >= threshold:
        j += 1
    if magnitude[j] >= threshold:
        raise BandwidthUnresolvedError(
            "no -3 dB crossing above the passband peak inside the frequency grid"
        )
    frac = (threshold - magnitude[j]) / (magnitude[j - 1] - magnitude[j])
    f_high = frequencies[j] - frac * (frequencies[j] - frequencies[j - 1])
    return float(f_low), float(f_high)


def q_rf(
    response: RfResponse,
    passband_center: float,
    fsr: float | None = None,
    convention: str = "fsr",
) -> float:
    """RF quality factor of the passband containing passband_center.

    The default convention divides the RF free spectral range (which the
    caller must supply, since a response grid carries no tap spacing) by the
    half-power bandwidth, making the result grid-independent. The
    alternative convention="center" divides the passband center frequency
    by the bandwidth instead and needs no fsr.
    """
    if convention not in ("fsr", "center"):
        raise ValidationError(f"unknown q_rf convention {convention!r}")
    mags = response.magnitude
    start = int(np.argmin(np.abs(response.frequencies - passband_center)))
    peak = _climb_to_peak(mags, start)
    f_low, f_high = passband_3db(response.frequencies, mags, peak)
    width = f_high - f_low
    if convention == "center":
        return passband_center / width
    if fsr is None:
        raise ValidationError("q_rf with convention='fsr' requires the fsr argument")
    return fsr / width


def apply_to_waveform(taps: TapWeights, waveform: Waveform) -> Waveform:
    """Run the FIR sum in the time domain: y[m] = sum_n a_n x[m - n k].

    T must be an integer number k of samples at the waveform rate (within
    1e-6 relative); the output carries the zero-padded tail, so its length
    is len(x) + (N - 1) k.
    """
    k_exact = taps.tap_spacing * waveform.sample_rate
    k = int(round(k_exact))
    if k < 1 or abs(k_exact - k) > 1e-6 * k_exact:
        k_lo = max(1, math.floor(k_exact))
        suggestion = ", ".join(
            f"{m / taps.tap_spacing:.6g} Hz" for m in (k_lo, k_lo + 1)
        )
        raise SampleAlignmentError(
            f"tap spacing {taps.tap_spacing:g} s is {k_exact:.9g} samples at "
            f"{waveform.sample_rate:g} Hz; resample so T*fs is an integer "
            f"(e.g. fs = {suggestion})"
        )
    x = waveform.samples
    coeffs = taps.coefficients
    out = np.zeros(len(x) + (len(coeffs) - 1) * k)
    for n, a in enumerate(coeffs):
        out[n * k : n * k + len(x)] += a * x
    return Waveform(waveform.sample_rate, out)


def _local_maxima(magnitude: np.ndarray) -> np.ndarray:
    left = np.empty_like(magnitude)
    right = np.empty_like(magnitude)
    left[0] = -np.inf
    left[1:] = magnitude[:-1]
    right[-1] = -np.inf
    right[:-1] = magnitude[1:]
    return np.nonzero((magnitude > left) & (magnitude >= right))[0]


def sidelobe_level(response: RfResponse) -> float:
    """Highest non-mainlobe peak relative to the mainlobe, in dB (negative).

    Peaks within 1e-3 relative (under 0.01 dB) of the global maximum are
    treated as periodic or mirror images of the mainlobe, or as passband
    ripple, and excluded; the grid should be dense enough that a sampled
    image lands within that tolerance (a few thousand points per period
    covers tap counts up to the low hundreds). Returns -inf when no
    distinct sidelobe exists.
    """
    mags = response.magnitude
    peaks = _local_maxima(mags)
    if len(peaks) == 0:
        return -math.inf
    main = float(mags.max())
    if main == 0.0:
        return -math.inf
    side = [float(mags[p]) for p in peaks if mags[p] < main * (1.0 - 1e-3)]
    if not side:
        return -math.inf
    return 20.0 * math.log10(max(side) / main)
