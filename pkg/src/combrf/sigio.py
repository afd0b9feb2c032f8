"""Waveform/spectrum containers and deterministic CSV output.

CSV dialect: comma separator, '.' decimal, header row, 12 significant
digits, newline-terminated, no locale dependence. Identical inputs always
produce byte-identical files.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ValidationError


@dataclass(frozen=True)
class Waveform:
    """Real sampled RF waveform."""

    sample_rate: float  # Hz
    samples: np.ndarray

    def __post_init__(self):
        if not math.isfinite(self.sample_rate) or self.sample_rate <= 0.0:
            raise ValidationError(f"sample_rate > 0 required, got {self.sample_rate!r}")
        samples = np.asarray(self.samples, dtype=float)
        if samples.ndim != 1:
            raise ValidationError("samples must be a 1-D vector")
        if not np.all(np.isfinite(samples)):
            raise ValidationError("samples must all be finite")
        samples = samples.copy()
        samples.flags.writeable = False
        object.__setattr__(self, "samples", samples)

    def __len__(self) -> int:
        return len(self.samples)

    @property
    def duration(self) -> float:
        return len(self.samples) / self.sample_rate

    @property
    def times(self) -> np.ndarray:
        return np.arange(len(self.samples)) / self.sample_rate


@dataclass(frozen=True)
class Spectrum:
    """Power spectrum on a strictly increasing frequency grid, power in dB."""

    frequencies: np.ndarray  # Hz
    power: np.ndarray        # dB; -inf marks fully suppressed bins

    def __post_init__(self):
        freqs = np.asarray(self.frequencies, dtype=float)
        power = np.asarray(self.power, dtype=float)
        if freqs.ndim != 1 or power.ndim != 1:
            raise ValidationError("spectrum arrays must be 1-D")
        if len(freqs) != len(power):
            raise ValidationError(
                f"frequency/power length mismatch: {len(freqs)} vs {len(power)}"
            )
        if len(freqs) and not np.all(np.diff(freqs) > 0.0):
            raise ValidationError("frequency grid must be strictly increasing")
        if np.any(np.isnan(power)) or np.any(np.isposinf(power)):
            raise ValidationError("power values must not be NaN or +inf")
        freqs = freqs.copy()
        power = power.copy()
        freqs.flags.writeable = False
        power.flags.writeable = False
        object.__setattr__(self, "frequencies", freqs)
        object.__setattr__(self, "power", power)

    def __len__(self) -> int:
        return len(self.frequencies)

    @property
    def power_linear(self) -> np.ndarray:
        return 10.0 ** (self.power / 10.0)


def _format_value(value) -> str:
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return f"{float(value):.12g}"


def write_csv_rows(path, header: list[str], rows) -> None:
    """Write rows with a deterministic format: header, 12 significant digits."""
    path = Path(path)
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_format_value(v) for v in row) + "\n")


def write_csv(obj, path) -> None:
    """Write a domain object as CSV; column layout depends on the object.

    Accepts Spectrum (frequency_hz, power_db), RfResponse (frequency_hz,
    magnitude_db, phase_deg), ArrayPattern (angle_deg, magnitude_db),
    CalibrationReport (iteration, max_error_db), and CombSpec (index,
    frequency_hz, power_dbm). Dispatch is structural so this module stays
    free of imports from the domain modules.
    """
    if hasattr(obj, "values") and hasattr(obj, "frequencies"):
        mag_db = obj.magnitude_db
        phase = obj.phase_deg
        write_csv_rows(
            path,
            ["frequency_hz", "magnitude_db", "phase_deg"],
            zip(obj.frequencies, mag_db, phase),
        )
    elif hasattr(obj, "angles") and hasattr(obj, "magnitude"):
        with np.errstate(divide="ignore"):
            mag_db = 20.0 * np.log10(obj.magnitude)
        write_csv_rows(path, ["angle_deg", "magnitude_db"], zip(obj.angles, mag_db))
    elif hasattr(obj, "error_trace"):
        write_csv_rows(
            path,
            ["iteration", "max_error_db"],
            ((i, e) for i, e in enumerate(obj.error_trace, start=1)),
        )
    elif hasattr(obj, "lines") and hasattr(obj, "fsr"):
        write_csv_rows(
            path,
            ["index", "frequency_hz", "power_dbm"],
            ((l.index, l.frequency, l.power) for l in obj.lines),
        )
    elif hasattr(obj, "power") and hasattr(obj, "frequencies"):
        write_csv_rows(path, ["frequency_hz", "power_db"], zip(obj.frequencies, obj.power))
    else:
        raise ValidationError(f"no CSV layout for object of type {type(obj).__name__}")


def write_json(doc: dict, path) -> None:
    """Write a JSON document with stable key order and a trailing newline."""
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True, allow_nan=False)
        fh.write("\n")


def read_json(path) -> dict:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError:
        raise
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
