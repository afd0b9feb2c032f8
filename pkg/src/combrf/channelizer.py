"""Vernier RF channelization.

Pairing a comb with a periodic filter whose free spectral range differs by
a small offset maps wavelength channel k to the RF center frequency

    f_k = base_offset + k * (filter_fsr - comb_fsr),

so a broadband RF spectrum can be sliced into per-channel segments, gated
by binary channel weights, and recombined.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import CoverageError, InvalidPlanError, ValidationError
from .sigio import Spectrum

LINESHAPES = ("rectangular", "lorentzian")


@dataclass(frozen=True)
class ChannelPlan:
    """Vernier pair, channel count, and per-channel lineshape.

    fwhm applies to the lorentzian lineshape and defaults to the channel
    bandwidth, approximating a micro-ring resonance. The rectangular
    lineshape gates exactly the in-band grid points.
    """

    comb_fsr: float            # Hz
    filter_fsr: float          # Hz
    n_channels: int
    base_offset: float         # Hz, RF center of channel 0
    channel_bandwidth: float   # Hz
    lineshape: str = "lorentzian"
    fwhm: float | None = None  # Hz

    def __post_init__(self):
        if not math.isfinite(self.comb_fsr) or self.comb_fsr <= 0.0:
            raise ValidationError(f"comb_fsr > 0 required, got {self.comb_fsr!r}")
        if not math.isfinite(self.filter_fsr) or self.filter_fsr <= 0.0:
            raise ValidationError(f"filter_fsr > 0 required, got {self.filter_fsr!r}")
        if self.filter_fsr == self.comb_fsr:
            raise ValidationError("filter_fsr must differ from comb_fsr (degenerate Vernier)")
        if self.n_channels < 1:
            raise ValidationError(f"n_channels >= 1 required, got {self.n_channels}")
        if not math.isfinite(self.base_offset) or self.base_offset < 0.0:
            raise ValidationError(f"base_offset >= 0 required, got {self.base_offset!r}")
        if not math.isfinite(self.channel_bandwidth) or self.channel_bandwidth <= 0.0:
            raise ValidationError(
                f"channel_bandwidth > 0 required, got {self.channel_bandwidth!r}"
            )
        if self.lineshape not in LINESHAPES:
            raise ValidationError(
                f"lineshape must be one of {LINESHAPES}, got {self.lineshape!r}"
            )
        if self.fwhm is not None and (not math.isfinite(self.fwhm) or self.fwhm <= 0.0):
            raise ValidationError(f"fwhm > 0 required, got {self.fwhm!r}")

    @property
    def channel_step(self) -> float:
        """Vernier step between adjacent RF channel centers (signed)."""
        return self.filter_fsr - self.comb_fsr

    @property
    def effective_fwhm(self) -> float:
        return self.channel_bandwidth if self.fwhm is None else self.fwhm

    def to_json_dict(self) -> dict:
        return {
            "comb_fsr_hz": self.comb_fsr,
            "filter_fsr_hz": self.filter_fsr,
            "n_channels": self.n_channels,
            "base_offset_hz": self.base_offset,
            "channel_bandwidth_hz": self.channel_bandwidth,
            "lineshape": self.lineshape,
            "fwhm_hz": self.fwhm,
        }


@dataclass(frozen=True)
class ChannelSegment:
    """One channel's share of the input spectrum, linear power on the source grid."""

    index: int
    rf_center: float  # Hz
    weight: int       # 0 or 1
    power_linear: np.ndarray

    def __post_init__(self):
        if self.weight not in (0, 1):
            raise ValidationError(f"channel weight must be 0 or 1, got {self.weight!r}")
        power = np.asarray(self.power_linear, dtype=float)
        if power.ndim != 1:
            raise ValidationError("segment power must be 1-D")
        if np.any(~np.isfinite(power)) or np.any(power < 0.0):
            raise ValidationError("segment power must be finite and >= 0")
        power = power.copy()
        power.flags.writeable = False
        object.__setattr__(self, "power_linear", power)


@dataclass(frozen=True)
class ChannelizedSpectrum:
    """All channel segments plus the source grid they share."""

    plan: ChannelPlan
    frequencies: np.ndarray  # source grid, Hz
    segments: tuple[ChannelSegment, ...]

    def __post_init__(self):
        freqs = np.asarray(self.frequencies, dtype=float)
        if freqs.ndim != 1 or not np.all(np.diff(freqs) > 0.0):
            raise ValidationError("source grid must be 1-D and strictly increasing")
        if len(self.segments) != self.plan.n_channels:
            raise ValidationError("segment count must equal the plan's channel count")
        for seg in self.segments:
            if len(seg.power_linear) != len(freqs):
                raise ValidationError(
                    f"channel {seg.index}: segment grid inconsistent with source grid"
                )
        freqs = freqs.copy()
        freqs.flags.writeable = False
        object.__setattr__(self, "frequencies", freqs)
        object.__setattr__(self, "segments", tuple(self.segments))

    @property
    def weights(self) -> np.ndarray:
        return np.array([seg.weight for seg in self.segments], dtype=int)


def channel_centers(plan: ChannelPlan) -> np.ndarray:
    """RF center frequencies f_k = base_offset + k * (filter_fsr - comb_fsr)."""
    centers = plan.base_offset + np.arange(plan.n_channels) * plan.channel_step
    negative = np.nonzero(centers < 0.0)[0]
    if len(negative):
        k = int(negative[0])
        raise InvalidPlanError(
            f"channel {k} maps to negative RF center {centers[k]:g} Hz"
        )
    return centers


def operation_bandwidth(plan: ChannelPlan) -> float:
    """Total RF bandwidth the channelizer covers: n_channels * channel_bandwidth."""
    return plan.n_channels * plan.channel_bandwidth


def _lineshape_profile(plan: ChannelPlan, frequencies: np.ndarray, center: float) -> np.ndarray:
    if plan.lineshape == "rectangular":
        # half-open passband so contiguous channels partition the band
        # without double-counting shared edge points
        half = 0.5 * plan.channel_bandwidth
        return ((frequencies >= center - half) & (frequencies < center + half)).astype(float)
    offset = 2.0 * (frequencies - center) / plan.effective_fwhm
    return 1.0 / (1.0 + offset**2)


def slice_spectrum(plan: ChannelPlan, rf_spectrum: Spectrum) -> ChannelizedSpectrum:
    """Slice the input spectrum into per-channel segments.

    Each segment is the input's linear power multiplied by the channel
    lineshape centered at f_k. The input grid must cover every channel
    passband; otherwise a CoverageError names the first uncovered channel.
    """
    centers = channel_centers(plan)
    freqs = rf_spectrum.frequencies
    half = 0.5 * plan.channel_bandwidth
    for k, center in enumerate(centers):
        if center - half < freqs[0] or center + half > freqs[-1]:
            raise CoverageError(
                k,
                f"input grid [{freqs[0]:g}, {freqs[-1]:g}] Hz does not cover channel {k} "
                f"passband [{center - half:g}, {center + half:g}] Hz",
            )
    power_linear = rf_spectrum.power_linear
    segments = tuple(
        ChannelSegment(
            index=k,
            rf_center=float(center),
            weight=1,
            power_linear=power_linear * _lineshape_profile(plan, freqs, center),
        )
        for k, center in enumerate(centers)
    )
    return ChannelizedSpectrum(plan, freqs, segments)


def apply_binary_weights(channelized: ChannelizedSpectrum, weights) -> ChannelizedSpectrum:
    """Gate channels on or off; weight-0 segments are zeroed."""
    weights = np.asarray(weights)
    if weights.shape != (channelized.plan.n_channels,):
        raise ValidationError(
            f"{weights.size} weights for {channelized.plan.n_channels} channels"
        )
    if not np.all(np.isin(weights, (0, 1))):
        raise ValidationError("channel weights must be binary (0 or 1)")
    segments = tuple(
        ChannelSegment(
            index=seg.index,
            rf_center=seg.rf_center,
            weight=int(w),
            power_linear=seg.power_linear * int(w),
        )
        for seg, w in zip(channelized.segments, weights)
    )
    return ChannelizedSpectrum(channelized.plan, channelized.frequencies, segments)


def reconstruct(channelized: ChannelizedSpectrum) -> Spectrum:
    """Sum the weighted segments back onto the source grid (power in dB)."""
    total = np.zeros(len(channelized.frequencies))
    for seg in channelized.segments:
        total += seg.weight * seg.power_linear
    with np.errstate(divide="ignore"):
        power_db = 10.0 * np.log10(total)
    return Spectrum(channelized.frequencies, power_db)
