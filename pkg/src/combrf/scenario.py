"""Scenario files: versioned JSON configs driving the CLI.

A scenario holds optional task sections (comb, dispersion, design, shaping,
beamform, channelizer) plus an RNG seed and output directory. Loading
applies defaults, records the provenance of every defaulted field, and
rejects unknown fields outright so typos cannot silently change a run.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

from .channelizer import ChannelPlan
from .comb import EnvelopeParams
from .errors import ValidationError
from .shaper import ActuatorModel
from .sigio import read_json, write_json
from .transversal import DispersionLink

SCHEMA_VERSION = 1

DESIGN_KINDS = ("sinc", "hilbert", "differentiator")

_REQUIRED = object()


@dataclass(frozen=True)
class CombSection:
    center_frequency_hz: float = 193.4e12
    fsr_hz: float = 49e9
    n_lines: int = 81
    label: str = ""
    envelope: EnvelopeParams = EnvelopeParams()


@dataclass(frozen=True)
class DesignSection:
    kind: str
    n_taps: int = 80
    bandwidth_hz: float = 1e9
    center_frequency_hz: float = 10e9
    apodization_sigma: float | None = None  # None: n_taps/6 for sinc, unused otherwise


@dataclass(frozen=True)
class ShapingSection:
    max_spread_db: float = 15.0
    tolerance_db: float = 0.1
    max_iterations: int = 20
    osa_noise_db: float = 0.0
    actuator: ActuatorModel = ActuatorModel()


@dataclass(frozen=True)
class BeamformSection:
    n_elements: int = 81
    rf_frequency_hz: float = 10e9
    element_spacing_m: float | None = None  # None: half wavelength
    inter_element_delay_s: float = 0.0
    angle_step_deg: float = 0.01
    element_sweep: tuple[int, ...] = (11, 21, 41, 81)
    steering_delays_s: tuple[float, ...] | None = None  # None: just the config delay


@dataclass(frozen=True)
class ChannelizerSection:
    plan: ChannelPlan = ChannelPlan(
        comb_fsr=49e9,
        filter_fsr=49.2e9,
        n_channels=20,
        base_offset=1e9,
        channel_bandwidth=0.2e9,
    )
    weights: tuple[int, ...] | None = None  # None: all channels on
    input_power_dbm: float = 0.0
    input_points: int = 4001
    input_f_min_hz: float | None = None  # None: cover all channel passbands
    input_f_max_hz: float | None = None


@dataclass(frozen=True)
class ScenarioConfig:
    seed: int = 0
    output_dir: str | None = None
    comb: CombSection | None = None
    dispersion: DispersionLink | None = None
    design: DesignSection | None = None
    shaping: ShapingSection | None = None
    beamform: BeamformSection | None = None
    channelizer: ChannelizerSection | None = None
    defaulted_fields: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        sections = (
            self.comb,
            self.dispersion,
            self.design,
            self.shaping,
            self.beamform,
            self.channelizer,
        )
        if all(section is None for section in sections):
            raise ValidationError("scenario must contain at least one task section")


class _Reader:
    """Tracks consumed keys, applies defaults, and records their provenance."""

    def __init__(self, doc: dict, name: str, defaulted: list[str], prefix: str | None = None):
        if not isinstance(doc, dict):
            raise ValidationError(f"{name} must be a JSON object, got {type(doc).__name__}")
        self.doc = doc
        self.name = name
        self.prefix = name if prefix is None else prefix
        self.defaulted = defaulted
        self.seen: set[str] = set()

    def get(self, key: str, default=_REQUIRED):
        self.seen.add(key)
        if key in self.doc:
            return self.doc[key]
        if default is _REQUIRED:
            raise ValidationError(f"{self.name}.{key} is required")
        self.defaulted.append(f"{self.prefix}.{key}" if self.prefix else key)
        return default

    def finish(self):
        unknown = set(self.doc) - self.seen
        if unknown:
            raise ValidationError(f"unknown fields in {self.name}: {sorted(unknown)}")


def _as_number(value, name: str, minimum=None, strict=False, allow_none=False):
    if value is None:
        if allow_none:
            return None
        raise ValidationError(f"{name} must be a number, got null")
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValidationError(f"{name} must be a number, got {value!r}")
    value = float(value)
    if not math.isfinite(value):
        raise ValidationError(f"{name} must be finite, got {value!r}")
    if minimum is not None:
        if strict and value <= minimum:
            raise ValidationError(f"{name}: {name.rsplit('.', 1)[-1]} > {minimum:g} required, got {value!r}")
        if not strict and value < minimum:
            raise ValidationError(f"{name}: {name.rsplit('.', 1)[-1]} >= {minimum:g} required, got {value!r}")
    return value


def _as_int(value, name: str, minimum=None):
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValidationError(f"{name} must be an integer, got {value!r}")
    if minimum is not None and value < minimum:
        raise ValidationError(f"{name}: {name.rsplit('.', 1)[-1]} >= {minimum} required, got {value}")
    return int(value)


def _parse_envelope(doc: dict, defaulted: list[str]) -> EnvelopeParams:
    reader = _Reader(doc, "comb.envelope", defaulted)
    params = EnvelopeParams(
        peak_power_dbm=_as_number(reader.get("peak_power_dbm", 0.0), "comb.envelope.peak_power_dbm"),
        sech_width=_as_number(
            reader.get("sech_width", 20.0), "comb.envelope.sech_width", allow_none=True
        ),
        modulation_depth_db=_as_number(
            reader.get("modulation_depth_db", 0.0), "comb.envelope.modulation_depth_db", minimum=0.0
        ),
        modulation_period=_as_number(
            reader.get("modulation_period", 0.0), "comb.envelope.modulation_period", minimum=0.0
        ),
        modulation_phase=_as_number(
            reader.get("modulation_phase", 0.0), "comb.envelope.modulation_phase"
        ),
        offset=_as_number(reader.get("offset", 0.0), "comb.envelope.offset"),
    )
    reader.finish()
    return params


def _parse_comb(doc: dict, defaulted: list[str]) -> CombSection:
    reader = _Reader(doc, "comb", defaulted)
    envelope_doc = reader.get("envelope", None)
    section = CombSection(
        center_frequency_hz=_as_number(
            reader.get("center_frequency_hz", 193.4e12), "comb.center_frequency_hz",
            minimum=0.0, strict=True,
        ),
        fsr_hz=_as_number(reader.get("fsr_hz", 49e9), "comb.fsr_hz", minimum=0.0, strict=True),
        n_lines=_as_int(reader.get("n_lines", 81), "comb.n_lines", minimum=2),
        label=str(reader.get("label", "")),
        envelope=(
            _parse_envelope(envelope_doc, defaulted)
            if envelope_doc is not None
            else EnvelopeParams()
        ),
    )
    if envelope_doc is None:
        defaulted.append("comb.envelope")
    reader.finish()
    return section


def _parse_dispersion(doc: dict, defaulted: list[str]) -> DispersionLink:
    reader = _Reader(doc, "dispersion", defaulted)
    link = DispersionLink(
        dispersion=_as_number(
            reader.get("dispersion_ps_per_nm_km", 17.0), "dispersion.dispersion_ps_per_nm_km"
        ),
        length=_as_number(reader.get("length_km", 4.0), "dispersion.length_km", minimum=0.0),
    )
    reader.finish()
    return link


def _parse_design(doc: dict, defaulted: list[str]) -> DesignSection:
    reader = _Reader(doc, "design", defaulted)
    kind = reader.get("kind")
    if kind not in DESIGN_KINDS:
        raise ValidationError(f"design.kind must be one of {DESIGN_KINDS}, got {kind!r}")
    section = DesignSection(
        kind=kind,
        n_taps=_as_int(reader.get("n_taps", 80), "design.n_taps", minimum=2),
        bandwidth_hz=_as_number(
            reader.get("bandwidth_hz", 1e9), "design.bandwidth_hz", minimum=0.0, strict=True
        ),
        center_frequency_hz=_as_number(
            reader.get("center_frequency_hz", 10e9), "design.center_frequency_hz", minimum=0.0
        ),
        apodization_sigma=_as_number(
            reader.get("apodization_sigma", None),
            "design.apodization_sigma",
            minimum=0.0,
            allow_none=True,
        ),
    )
    reader.finish()
    return section


def _parse_shaping(doc: dict, defaulted: list[str]) -> ShapingSection:
    reader = _Reader(doc, "shaping", defaulted)
    section = ShapingSection(
        max_spread_db=_as_number(
            reader.get("max_spread_db", 15.0), "shaping.max_spread_db", minimum=0.0, strict=True
        ),
        tolerance_db=_as_number(
            reader.get("tolerance_db", 0.1), "shaping.tolerance_db", minimum=0.0, strict=True
        ),
        max_iterations=_as_int(reader.get("max_iterations", 20), "shaping.max_iterations", minimum=1),
        osa_noise_db=_as_number(
            reader.get("osa_noise_db", 0.0), "shaping.osa_noise_db", minimum=0.0
        ),
        actuator=ActuatorModel(
            gain_error=_as_number(reader.get("gain_error", 0.0), "shaping.gain_error"),
            quantization=_as_number(
                reader.get("quantization_db", 0.0), "shaping.quantization_db", minimum=0.0
            ),
            floor=_as_number(
                reader.get("floor_db", 60.0), "shaping.floor_db", minimum=0.0, strict=True
            ),
        ),
    )
    reader.finish()
    return section


def _parse_beamform(doc: dict, defaulted: list[str]) -> BeamformSection:
    reader = _Reader(doc, "beamform", defaulted)
    sweep = reader.get("element_sweep", [11, 21, 41, 81])
    if not isinstance(sweep, list) or not sweep:
        raise ValidationError("beamform.element_sweep must be a non-empty list")
    steering = reader.get("steering_delays_s", None)
    if steering is not None:
        if not isinstance(steering, list) or not steering:
            raise ValidationError("beamform.steering_delays_s must be a non-empty list or null")
        steering = tuple(
            _as_number(tau, f"beamform.steering_delays_s[{i}]") for i, tau in enumerate(steering)
        )
    section = BeamformSection(
        n_elements=_as_int(reader.get("n_elements", 81), "beamform.n_elements", minimum=2),
        rf_frequency_hz=_as_number(
            reader.get("rf_frequency_hz", 10e9), "beamform.rf_frequency_hz",
            minimum=0.0, strict=True,
        ),
        element_spacing_m=_as_number(
            reader.get("element_spacing_m", None), "beamform.element_spacing_m", allow_none=True
        ),
        inter_element_delay_s=_as_number(
            reader.get("inter_element_delay_s", 0.0), "beamform.inter_element_delay_s"
        ),
        angle_step_deg=_as_number(
            reader.get("angle_step_deg", 0.01), "beamform.angle_step_deg",
            minimum=0.0, strict=True,
        ),
        element_sweep=tuple(
            _as_int(m, f"beamform.element_sweep[{i}]", minimum=2) for i, m in enumerate(sweep)
        ),
        steering_delays_s=steering,
    )
    reader.finish()
    return section


def _parse_channelizer(doc: dict, defaulted: list[str]) -> ChannelizerSection:
    reader = _Reader(doc, "channelizer", defaulted)
    weights = reader.get("weights", None)
    if weights is not None:
        if not isinstance(weights, list):
            raise ValidationError("channelizer.weights must be a list or null")
        for i, w in enumerate(weights):
            if w not in (0, 1) or isinstance(w, bool):
                raise ValidationError(
                    f"channelizer.weights[{i}] must be 0 or 1, got {w!r}"
                )
        weights = tuple(int(w) for w in weights)
    plan = ChannelPlan(
        comb_fsr=_as_number(
            reader.get("comb_fsr_hz", 49e9), "channelizer.comb_fsr_hz", minimum=0.0, strict=True
        ),
        filter_fsr=_as_number(
            reader.get("filter_fsr_hz", 49.2e9), "channelizer.filter_fsr_hz",
            minimum=0.0, strict=True,
        ),
        n_channels=_as_int(reader.get("n_channels", 20), "channelizer.n_channels", minimum=1),
        base_offset=_as_number(
            reader.get("base_offset_hz", 1e9), "channelizer.base_offset_hz", minimum=0.0
        ),
        channel_bandwidth=_as_number(
            reader.get("channel_bandwidth_hz", 0.2e9), "channelizer.channel_bandwidth_hz",
            minimum=0.0, strict=True,
        ),
        lineshape=str(reader.get("lineshape", "lorentzian")),
        fwhm=_as_number(reader.get("fwhm_hz", None), "channelizer.fwhm_hz", allow_none=True),
    )
    if weights is not None and len(weights) != plan.n_channels:
        raise ValidationError(
            f"channelizer.weights has {len(weights)} entries for {plan.n_channels} channels"
        )
    section = ChannelizerSection(
        plan=plan,
        weights=weights,
        input_power_dbm=_as_number(
            reader.get("input_power_dbm", 0.0), "channelizer.input_power_dbm"
        ),
        input_points=_as_int(reader.get("input_points", 4001), "channelizer.input_points", minimum=2),
        input_f_min_hz=_as_number(
            reader.get("input_f_min_hz", None), "channelizer.input_f_min_hz", allow_none=True
        ),
        input_f_max_hz=_as_number(
            reader.get("input_f_max_hz", None), "channelizer.input_f_max_hz", allow_none=True
        ),
    )
    reader.finish()
    return section


def load_scenario(path) -> ScenarioConfig:
    """Load and validate a scenario file, applying and recording defaults."""
    doc = read_json(path)
    return parse_scenario(doc, origin=str(path))


def parse_scenario(doc: dict, origin: str = "scenario") -> ScenarioConfig:
    defaulted: list[str] = []
    reader = _Reader(doc, origin, defaulted, prefix="")
    version = reader.get("schema_version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise ValidationError(
            f"unsupported schema_version {version!r}; this toolkit reads version {SCHEMA_VERSION}"
        )
    seed = _as_int(reader.get("seed", 0), "seed", minimum=0)
    output_dir = reader.get("output_dir", None)
    if output_dir is not None and not isinstance(output_dir, str):
        raise ValidationError(f"output_dir must be a string, got {output_dir!r}")

    sections = {}
    for name, parser in (
        ("comb", _parse_comb),
        ("dispersion", _parse_dispersion),
        ("design", _parse_design),
        ("shaping", _parse_shaping),
        ("beamform", _parse_beamform),
        ("channelizer", _parse_channelizer),
    ):
        section_doc = reader.get(name, None)
        sections[name] = parser(section_doc, defaulted) if section_doc is not None else None
    reader.finish()
    return ScenarioConfig(
        seed=seed,
        output_dir=output_dir,
        defaulted_fields=tuple(defaulted),
        **sections,
    )


def scenario_to_dict(config: ScenarioConfig) -> dict:
    """Serialize with every field explicit so a round trip applies no defaults."""
    doc: dict = {
        "schema_version": SCHEMA_VERSION,
        "seed": config.seed,
        "output_dir": config.output_dir,
    }
    if config.comb is not None:
        env = config.comb.envelope
        doc["comb"] = {
            "center_frequency_hz": config.comb.center_frequency_hz,
            "fsr_hz": config.comb.fsr_hz,
            "n_lines": config.comb.n_lines,
            "label": config.comb.label,
            "envelope": {
                "peak_power_dbm": env.peak_power_dbm,
                "sech_width": env.sech_width,
                "modulation_depth_db": env.modulation_depth_db,
                "modulation_period": env.modulation_period,
                "modulation_phase": env.modulation_phase,
                "offset": env.offset,
            },
        }
    if config.dispersion is not None:
        doc["dispersion"] = {
            "dispersion_ps_per_nm_km": config.dispersion.dispersion,
            "length_km": config.dispersion.length,
        }
    if config.design is not None:
        doc["design"] = {
            "kind": config.design.kind,
            "n_taps": config.design.n_taps,
            "bandwidth_hz": config.design.bandwidth_hz,
            "center_frequency_hz": config.design.center_frequency_hz,
            "apodization_sigma": config.design.apodization_sigma,
        }
    if config.shaping is not None:
        doc["shaping"] = {
            "max_spread_db": config.shaping.max_spread_db,
            "tolerance_db": config.shaping.tolerance_db,
            "max_iterations": config.shaping.max_iterations,
            "osa_noise_db": config.shaping.osa_noise_db,
            "gain_error": config.shaping.actuator.gain_error,
            "quantization_db": config.shaping.actuator.quantization,
            "floor_db": config.shaping.actuator.floor,
        }
    if config.beamform is not None:
        bf = config.beamform
        doc["beamform"] = {
            "n_elements": bf.n_elements,
            "rf_frequency_hz": bf.rf_frequency_hz,
            "element_spacing_m": bf.element_spacing_m,
            "inter_element_delay_s": bf.inter_element_delay_s,
            "angle_step_deg": bf.angle_step_deg,
            "element_sweep": list(bf.element_sweep),
            "steering_delays_s": (
                list(bf.steering_delays_s) if bf.steering_delays_s is not None else None
            ),
        }
    if config.channelizer is not None:
        ch = config.channelizer
        doc["channelizer"] = {
            "comb_fsr_hz": ch.plan.comb_fsr,
            "filter_fsr_hz": ch.plan.filter_fsr,
            "n_channels": ch.plan.n_channels,
            "base_offset_hz": ch.plan.base_offset,
            "channel_bandwidth_hz": ch.plan.channel_bandwidth,
            "lineshape": ch.plan.lineshape,
            "fwhm_hz": ch.plan.fwhm,
            "weights": list(ch.weights) if ch.weights is not None else None,
            "input_power_dbm": ch.input_power_dbm,
            "input_points": ch.input_points,
            "input_f_min_hz": ch.input_f_min_hz,
            "input_f_max_hz": ch.input_f_max_hz,
        }
    return doc


def save_scenario(config: ScenarioConfig, path) -> None:
    write_json(scenario_to_dict(config), Path(path))
