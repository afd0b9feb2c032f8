"""True-time-delay beamforming for a uniform linear array.

Per-channel delays are ideal multiples of the dispersion-induced tap
spacing, so they carry no RF-frequency term and steering is squint-free.
The array factor, steering angle, and half-power beamwidth follow the
standard uniform-array expressions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constants import SPEED_OF_LIGHT
from .errors import BeamwidthUnresolvedError, UnreachableSteeringError, ValidationError

DEFAULT_ANGLE_STEP = 0.01  # degrees


@dataclass(frozen=True)
class BeamformerConfig:
    """Uniform linear array: M elements, spacing d, progressive delay tau.

    element_spacing=None resolves to half a wavelength at rf_frequency.
    """

    n_elements: int
    rf_frequency: float             # Hz
    element_spacing: float | None = None  # m
    inter_element_delay: float = 0.0      # s, signed

    def __post_init__(self):
        if self.n_elements < 2:
            raise ValidationError(f"n_elements >= 2 required, got {self.n_elements}")
        if not math.isfinite(self.rf_frequency) or self.rf_frequency <= 0.0:
            raise ValidationError(f"rf_frequency > 0 required, got {self.rf_frequency!r}")
        if self.element_spacing is None:
            spacing = SPEED_OF_LIGHT / (2.0 * self.rf_frequency)
            object.__setattr__(self, "element_spacing", spacing)
        if not math.isfinite(self.element_spacing) or self.element_spacing <= 0.0:
            raise ValidationError(f"element_spacing > 0 required, got {self.element_spacing!r}")
        if not math.isfinite(self.inter_element_delay):
            raise ValidationError("inter_element_delay must be finite")

    @property
    def wavelength(self) -> float:
        return SPEED_OF_LIGHT / self.rf_frequency


@dataclass(frozen=True)
class ArrayPattern:
    """Angular power pattern, linear magnitude normalized to peak 1."""

    angles: np.ndarray     # degrees
    magnitude: np.ndarray  # linear, peak 1

    def __post_init__(self):
        angles = np.asarray(self.angles, dtype=float)
        mags = np.asarray(self.magnitude, dtype=float)
        if angles.ndim != 1 or mags.ndim != 1 or len(angles) != len(mags):
            raise ValidationError("angles and magnitude must be 1-D with equal length")
        if len(angles) < 2:
            raise ValidationError("pattern needs at least 2 angle samples")
        if not np.all(np.diff(angles) > 0.0):
            raise ValidationError("angle grid must be strictly increasing")
        if not np.all(np.isfinite(mags)) or np.any(mags < 0.0):
            raise ValidationError("magnitude must be finite and >= 0")
        if not math.isclose(mags.max(), 1.0, rel_tol=1e-9):
            raise ValidationError(f"pattern must be normalized to peak 1, got {mags.max()}")
        angles = angles.copy()
        mags = mags.copy()
        angles.flags.writeable = False
        mags.flags.writeable = False
        object.__setattr__(self, "angles", angles)
        object.__setattr__(self, "magnitude", mags)


def true_time_delays(n_channels: int, tap_spacing: float) -> np.ndarray:
    """Per-channel delays m * T, m = 0..n-1; independent of RF frequency."""
    if n_channels < 1:
        raise ValidationError(f"n_channels >= 1 required, got {n_channels}")
    if not math.isfinite(tap_spacing) or tap_spacing == 0.0:
        raise ValidationError(f"tap_spacing must be finite and nonzero, got {tap_spacing!r}")
    return np.arange(n_channels) * tap_spacing


def steering_angle(tau: float, d: float) -> float:
    """Mainlobe direction arcsin(c tau / d) in degrees."""
    if not math.isfinite(d) or d <= 0.0:
        raise ValidationError(f"element spacing d > 0 required, got {d!r}")
    if not math.isfinite(tau):
        raise ValidationError("tau must be finite")
    ratio = SPEED_OF_LIGHT * tau / d
    if abs(ratio) > 1.0:
        raise UnreachableSteeringError(
            f"c*tau/d = {ratio:.4g} lies outside [-1, 1]; no physical steering angle"
        )
    return math.degrees(math.asin(ratio))


def default_angle_grid(step: float = DEFAULT_ANGLE_STEP) -> np.ndarray:
    n = int(round(180.0 / step)) + 1
    return np.linspace(-90.0, 90.0, n)


def array_factor(config: BeamformerConfig, angles_deg=None) -> ArrayPattern:
    """|sum_m exp(j 2 pi f (m tau - m d sin(theta) / c))|, normalized to peak 1."""
    if angles_deg is None:
        angles_deg = default_angle_grid()
    angles = np.asarray(angles_deg, dtype=float)
    theta = np.radians(angles)
    phase_step = (
        2.0
        * np.pi
        * config.rf_frequency
        * (config.inter_element_delay - config.element_spacing * np.sin(theta) / SPEED_OF_LIGHT)
    )
    z = np.exp(1j * phase_step)
    total = np.zeros(len(angles), dtype=complex)
    term = np.ones(len(angles), dtype=complex)
    for _ in range(config.n_elements):
        total += term
        term = term * z
    mags = np.abs(total)
    return ArrayPattern(angles, mags / mags.max())


def beamwidth_3db(pattern: ArrayPattern) -> float:
    """Angular width between the -3 dB crossings bracketing the peak.

    Crossings are linearly interpolated between grid points. Raises
    BeamwidthUnresolvedError when either crossing is outside the grid.
    """
    mags = pattern.magnitude
    angles = pattern.angles
    peak = int(np.argmax(mags))
    threshold = mags[peak] / math.sqrt(2.0)
    i = peak
    while i > 0 and mags[i] >= threshold:
        i -= 1
    if mags[i] >= threshold:
        raise BeamwidthUnresolvedError(
            "beam too wide: no -3 dB crossing below the peak inside the angle grid"
        )
    frac = (threshold - mags[i]) / (mags[i + 1] - mags[i])
    left = angles[i] + frac * (angles[i + 1] - angles[i])
    j = peak
    n = len(mags)
    while j < n - 1 and mags[j] >= threshold:
        j += 1
    if mags[j] >= threshold:
        raise BeamwidthUnresolvedError(
            "beam too wide: no -3 dB crossing above the peak inside the angle grid"
        )
    frac = (threshold - mags[j]) / (mags[j - 1] - mags[j])
    right = angles[j] - frac * (angles[j] - angles[j - 1])
    return float(right - left)


def beamwidth_vs_elements(
    element_counts,
    rf_frequency: float,
    element_spacing: float | None = None,
    inter_element_delay: float = 0.0,
    angles_deg=None,
) -> list[tuple[int, float]]:
    """Half-power beamwidth for each element count, on a shared grid."""
    results = []
    for m in element_counts:
        config = BeamformerConfig(
            n_elements=int(m),
            rf_frequency=rf_frequency,
            element_spacing=element_spacing,
            inter_element_delay=inter_element_delay,
        )
        pattern = array_factor(config, angles_deg)
        results.append((int(m), beamwidth_3db(pattern)))
    return results
