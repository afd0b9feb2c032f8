"""Parametric soliton-crystal comb spectra.

The comb is modeled phenomenologically: line powers follow a squared
hyperbolic-secant envelope multiplied, in the dB domain, by a periodic
"fingerprint" ripple of configurable depth and period. Cavity dynamics
(pump sweep, soliton formation) are out of scope; only the emitted line
grid matters downstream, where the shaped line powers become FIR tap
weights.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constants import SPEED_OF_LIGHT
from .errors import ValidationError


def dbm_to_mw(power_dbm):
    """Convert a power (scalar or array) from dBm to linear milliwatts."""
    return 10.0 ** (np.asarray(power_dbm, dtype=float) / 10.0)


def mw_to_dbm(power_mw):
    """Convert a power (scalar or array) from linear milliwatts to dBm. Requires power > 0."""
    arr = np.asarray(power_mw, dtype=float)
    if np.any(arr <= 0.0):
        raise ValidationError(f"power must be > 0 mW to express in dBm, got {power_mw!r}")
    return 10.0 * np.log10(arr)


@dataclass(frozen=True)
class CombLine:
    """One comb line: signed index offset from the pump, absolute frequency, power."""

    index: int
    frequency: float  # Hz
    power: float      # dBm


@dataclass(frozen=True)
class CombSpec:
    """A grid of comb lines anchored at the pump (index 0).

    Line frequencies are center_frequency + k * fsr by construction; the
    grid, not the individual lines, is the source of truth for frequency.
    """

    center_frequency: float  # Hz, pump line
    fsr: float               # Hz
    lines: tuple[CombLine, ...]
    label: str = ""

    def __post_init__(self):
        if not math.isfinite(self.fsr) or self.fsr <= 0.0:
            raise ValidationError(f"fsr > 0 required, got {self.fsr!r}")
        if not math.isfinite(self.center_frequency):
            raise ValidationError("center_frequency must be finite")
        if len(self.lines) < 2:
            raise ValidationError(f"comb needs at least 2 lines, got {len(self.lines)}")
        prev = None
        for line in self.lines:
            if prev is not None and line.index <= prev:
                raise ValidationError(
                    f"line indices must be strictly increasing, got {line.index} after {prev}"
                )
            prev = line.index
            if not math.isfinite(line.power):
                raise ValidationError(f"line {line.index}: power must be finite")
            expected = self.center_frequency + line.index * self.fsr
            if abs(line.frequency - expected) > 1e-6 * self.fsr:
                raise ValidationError(
                    f"line {line.index}: frequency {line.frequency} inconsistent with grid "
                    f"(expected {expected})"
                )

    @property
    def n_lines(self) -> int:
        return len(self.lines)

    @property
    def indices(self) -> np.ndarray:
        return np.array([line.index for line in self.lines], dtype=int)

    @property
    def frequencies(self) -> np.ndarray:
        return np.array([line.frequency for line in self.lines], dtype=float)

    @property
    def powers_dbm(self) -> np.ndarray:
        return np.array([line.power for line in self.lines], dtype=float)

    @property
    def powers_mw(self) -> np.ndarray:
        return 10.0 ** (self.powers_dbm / 10.0)

    def line_by_index(self, index: int) -> CombLine:
        for line in self.lines:
            if line.index == index:
                return line
        raise ValidationError(f"comb has no line with index {index}")

    def to_json_dict(self) -> dict:
        """Serialize to the on-disk schema; frequencies are never stored per line."""
        doc = {
            "center_frequency_hz": self.center_frequency,
            "fsr_hz": self.fsr,
            "lines": [{"index": int(l.index), "power_dbm": float(l.power)} for l in self.lines],
        }
        if self.label:
            doc["label"] = self.label
        return doc

    @classmethod
    def from_json_dict(cls, doc: dict) -> "CombSpec":
        allowed = {"center_frequency_hz", "fsr_hz", "lines", "label"}
        unknown = set(doc) - allowed
        if unknown:
            raise ValidationError(f"unknown comb fields: {sorted(unknown)}")
        for key in ("center_frequency_hz", "fsr_hz", "lines"):
            if key not in doc:
                raise ValidationError(f"comb document missing required field {key!r}")
        center = float(doc["center_frequency_hz"])
        fsr = float(doc["fsr_hz"])
        lines = []
        for entry in doc["lines"]:
            extra = set(entry) - {"index", "power_dbm"}
            if extra:
                raise ValidationError(f"unknown comb line fields: {sorted(extra)}")
            k = int(entry["index"])
            lines.append(CombLine(k, center + k * fsr, float(entry["power_dbm"])))
        return cls(center, fsr, tuple(lines), label=str(doc.get("label", "")))


@dataclass(frozen=True)
class EnvelopeParams:
    """Spectral envelope of a generated comb.

    sech_width sets the sech^2 envelope scale in line-index units (None means
    a flat envelope). The fingerprint ripple is a sinusoid in the dB domain
    with peak-to-peak modulation_depth_db and modulation_period in line
    indices. offset shifts the envelope peak away from the pump.
    """

    peak_power_dbm: float = 0.0
    sech_width: float | None = 20.0
    modulation_depth_db: float = 0.0
    modulation_period: float = 0.0
    modulation_phase: float = 0.0
    offset: float = 0.0

    def __post_init__(self):
        numeric = {
            "peak_power_dbm": self.peak_power_dbm,
            "modulation_depth_db": self.modulation_depth_db,
            "modulation_period": self.modulation_period,
            "modulation_phase": self.modulation_phase,
            "offset": self.offset,
        }
        for name, value in numeric.items():
            if not math.isfinite(value):
                raise ValidationError(f"envelope parameter {name} must be finite, got {value!r}")
        if self.sech_width is not None:
            if not math.isfinite(self.sech_width) or self.sech_width <= 0.0:
                raise ValidationError(f"sech_width must be > 0 or None, got {self.sech_width!r}")
        if self.modulation_depth_db < 0.0:
            raise ValidationError("modulation_depth_db must be >= 0")
        if self.modulation_depth_db > 0.0 and self.modulation_period <= 0.0:
            raise ValidationError("modulation_period must be > 0 when modulation depth is nonzero")

    @classmethod
    def flat(cls, peak_power_dbm: float = 0.0) -> "EnvelopeParams":
        """Envelope that assigns every line the same power."""
        return cls(peak_power_dbm=peak_power_dbm, sech_width=None)


def generate_soliton_crystal_comb(
    center_frequency: float,
    fsr: float,
    n_lines: int,
    envelope: EnvelopeParams = EnvelopeParams(),
    label: str = "",
) -> CombSpec:
    """Generate a comb whose powers follow sech^2 x fingerprint modulation.

    Parameters
    ----------
    center_frequency : float
        Pump optical frequency in Hz; the line at index 0.
    fsr : float
        Line spacing in Hz, > 0.
    n_lines : int
        Number of lines, >= 2. Indices run from -(n_lines // 2) upward, so
        the pump is always present.
    envelope : EnvelopeParams
        Envelope and fingerprint-ripple parameters.
    """
    if not math.isfinite(fsr) or fsr <= 0.0:
        raise ValidationError(f"fsr > 0 required, got {fsr!r}")
    if n_lines < 2:
        raise ValidationError(f"n_lines >= 2 required, got {n_lines}")
    if not math.isfinite(center_frequency) or center_frequency <= 0.0:
        raise ValidationError(f"center_frequency > 0 required, got {center_frequency!r}")

    indices = np.arange(n_lines) - n_lines // 2
    x = indices - envelope.offset
    powers = np.full(n_lines, envelope.peak_power_dbm, dtype=float)
    if envelope.sech_width is not None:
        u = np.abs(x / envelope.sech_width)
        # 20*log10(sech(u)), written to stay finite for any u
        powers += (20.0 / np.log(10.0)) * (np.log(2.0) - u - np.log1p(np.exp(-2.0 * u)))
    if envelope.modulation_depth_db > 0.0:
        powers += 0.5 * envelope.modulation_depth_db * np.cos(
            2.0 * np.pi * x / envelope.modulation_period + envelope.modulation_phase
        )
    lines = tuple(
        CombLine(int(k), center_frequency + int(k) * fsr, float(p))
        for k, p in zip(indices, powers)
    )
    return CombSpec(center_frequency, fsr, lines, label=label)


def fsr_to_wavelength_spacing(fsr: float, center_wavelength: float) -> float:
    """Comb line spacing in wavelength: delta_lambda = fsr * lambda^2 / c."""
    if not math.isfinite(fsr) or fsr < 0.0:
        raise ValidationError(f"fsr >= 0 required, got {fsr!r}")
    if not math.isfinite(center_wavelength) or center_wavelength <= 0.0:
        raise ValidationError(f"center_wavelength > 0 required, got {center_wavelength!r}")
    return fsr * center_wavelength**2 / SPEED_OF_LIGHT
