"""Command-line front end.

Subcommands map one-to-one onto the processing experiments: design
(tap-weight filters), shape (comb shaping with feedback calibration),
beamform (array patterns and beamwidth sweeps), channelize (Vernier
spectrum slicing), and simulate (every section of a scenario). Each
command writes CSV data files, PNG figures, and a manifest.json recording
the seed, resolved parameters, and every file written.

Exit codes: 0 success, 2 validation error, 3 numeric/infeasible, 4 I/O.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import plots
from .beamform import (
    ArrayPattern,
    BeamformerConfig,
    array_factor,
    beamwidth_3db,
    beamwidth_vs_elements,
    default_angle_grid,
    steering_angle,
)
from .channelizer import (
    ChannelPlan,
    apply_binary_weights,
    channel_centers,
    operation_bandwidth,
    reconstruct,
    slice_spectrum,
)
from .comb import (
    CombSpec,
    EnvelopeParams,
    fsr_to_wavelength_spacing,
    generate_soliton_crystal_comb,
)
from .constants import SPEED_OF_LIGHT
from .designs import BandpassDesign, differentiator_taps, hilbert_taps, sinc_bandpass_taps
from .errors import InfeasibleError, ValidationError
from .scenario import (
    BeamformSection,
    ChannelizerSection,
    CombSection,
    DesignSection,
    ScenarioConfig,
    ShapingSection,
    load_scenario,
)
from .shaper import ActuatorModel, apply_shaping, feedback_calibrate, pre_shape
from .sigio import Spectrum, write_csv, write_csv_rows, write_json
from .transversal import (
    DispersionLink,
    RfResponse,
    TapWeights,
    rf_fsr,
    sidelobe_level,
    tap_spacing,
    transfer_function,
)

_RESPONSE_POINTS = 1 << 13
_METRIC_POINTS = 1 << 16


@dataclass
class CommandOutcome:
    exit_code: int
    files: tuple[str, ...]
    summary: str


class _Run:
    """Output directory, seed, and manifest bookkeeping for one command."""

    def __init__(self, args, scenario: ScenarioConfig | None):
        out = args.out
        if out is None and scenario is not None and scenario.output_dir is not None:
            out = scenario.output_dir
        self.out_dir = Path(out if out is not None else "out")
        self.out_dir.mkdir(parents=True, exist_ok=True)
        seed = args.seed
        if seed is None:
            seed = scenario.seed if scenario is not None else 0
        self.seed = int(seed)
        self.figures = not args.no_figures
        self.files: list[str] = []
        self.lines: list[str] = []

    def path(self, name: str) -> Path:
        self.files.append(name)
        return self.out_dir / name

    def note(self, text: str):
        self.lines.append(text)

    def finish(self, command: str, parameters: dict) -> CommandOutcome:
        manifest = {
            "command": command,
            "seed": self.seed,
            "parameters": parameters,
            "files": sorted(self.files + ["manifest.json"]),
        }
        write_json(manifest, self.path("manifest.json"))
        summary = "\n".join(self.lines + [f"wrote {len(self.files)} files to {self.out_dir}"])
        return CommandOutcome(0, tuple(sorted(self.files)), summary)


def _pick(flag_value, section_value, default):
    if flag_value is not None:
        return flag_value
    if section_value is not None:
        return section_value
    return default


def _load_scenario_arg(args) -> ScenarioConfig | None:
    if args.scenario is None:
        return None
    return load_scenario(args.scenario)


def _resolve_tap_spacing(args, scenario: ScenarioConfig | None) -> float:
    """T from --tap-spacing, or from the dispersion link and comb grid."""
    if getattr(args, "tap_spacing", None) is not None:
        if args.tap_spacing <= 0.0:
            raise ValidationError(f"--tap-spacing must be > 0, got {args.tap_spacing}")
        return args.tap_spacing
    link_section = scenario.dispersion if scenario is not None else None
    comb_section = scenario.comb if scenario is not None else None
    link = DispersionLink(
        dispersion=_pick(getattr(args, "dispersion", None),
                         link_section.dispersion if link_section else None, 17.0),
        length=_pick(getattr(args, "length", None),
                     link_section.length if link_section else None, 4.0),
    )
    comb_fsr = _pick(getattr(args, "comb_fsr", None),
                     comb_section.fsr_hz if comb_section else None, 49e9)
    comb_center = _pick(getattr(args, "comb_center", None),
                        comb_section.center_frequency_hz if comb_section else None, 193.4e12)
    spacing = fsr_to_wavelength_spacing(comb_fsr, SPEED_OF_LIGHT / comb_center)
    return abs(tap_spacing(link, spacing))


def _design_from_args(args, scenario: ScenarioConfig | None):
    section = scenario.design if scenario is not None else None
    kind = args.kind if args.kind is not None else (section.kind if section else None)
    if kind is None:
        raise ValidationError("no design requested: give a filter kind or a scenario design section")
    n_taps = int(_pick(args.taps, section.n_taps if section else None, 80))
    bandwidth = _pick(args.bw, section.bandwidth_hz if section else None, 1e9)
    center = _pick(args.center, section.center_frequency_hz if section else None, 10e9)
    sigma = _pick(args.sigma, section.apodization_sigma if section else None, None)
    tap_dt = _resolve_tap_spacing(args, scenario)
    if kind == "sinc":
        if sigma is None:
            sigma = n_taps / 6.0
        design = BandpassDesign(n_taps, bandwidth, center, sigma)
        result = sinc_bandpass_taps(design, tap_dt)
        request = {
            "kind": kind, "n_taps": n_taps, "bandwidth_hz": bandwidth,
            "center_frequency_hz": center, "apodization_sigma": sigma,
        }
    elif kind == "hilbert":
        result = hilbert_taps(n_taps, tap_dt)
        request = {"kind": kind, "n_taps": n_taps}
    elif kind == "differentiator":
        result = differentiator_taps(n_taps, tap_dt)
        request = {"kind": kind, "n_taps": n_taps}
    else:
        raise ValidationError(f"unknown design kind {kind!r}")
    return result, request


def _metric_response(taps: TapWeights) -> RfResponse:
    values = np.fft.fft(taps.coefficients, _METRIC_POINTS)
    freqs = np.arange(_METRIC_POINTS) / (_METRIC_POINTS * taps.tap_spacing)
    return RfResponse(freqs, values)


def _finite_or_none(value: float):
    return value if math.isfinite(value) else None


def cmd_design(args) -> CommandOutcome:
    scenario = _load_scenario_arg(args)
    run = _Run(args, scenario)
    result, request = _design_from_args(args, scenario)
    taps = result.taps
    fsr = rf_fsr(taps)

    grid = np.arange(_RESPONSE_POINTS) / (_RESPONSE_POINTS * taps.tap_spacing)
    response = transfer_function(taps, grid)
    write_csv(response, run.path("response.csv"))
    write_json(taps.to_json_dict(), run.path("taps.json"))

    side = sidelobe_level(_metric_response(taps))
    metrics = {
        "request": request,
        "tap_spacing_s": taps.tap_spacing,
        "rf_fsr_hz": fsr,
        "achieved_center_hz": result.achieved_center,
        "achieved_bandwidth_hz": result.achieved_bandwidth,
        "q_rf": fsr / result.achieved_bandwidth,
        "sidelobe_level_db": _finite_or_none(side),
        "notes": result.notes,
        "seed": run.seed,
    }
    write_json(metrics, run.path("metrics.json"))
    if run.figures:
        plots.save_response_figure(response, run.path("response.png"),
                                   title=f"{request['kind']} response")
    run.note(
        f"{request['kind']}: {taps.n_taps} taps, rf_fsr {fsr / 1e9:.3f} GHz, "
        f"center {result.achieved_center / 1e9:.3f} GHz, "
        f"bandwidth {result.achieved_bandwidth / 1e9:.3f} GHz"
    )
    return run.finish("design", {"request": request, "tap_spacing_s": taps.tap_spacing})


def _comb_from_scenario(scenario: ScenarioConfig | None, args) -> tuple[CombSpec, CombSection]:
    section = scenario.comb if scenario is not None and scenario.comb is not None else CombSection()
    n_lines = int(_pick(getattr(args, "lines", None), section.n_lines, 81))
    fsr = _pick(getattr(args, "comb_fsr", None), section.fsr_hz, 49e9)
    center = _pick(getattr(args, "comb_center", None), section.center_frequency_hz, 193.4e12)
    section = CombSection(
        center_frequency_hz=center,
        fsr_hz=fsr,
        n_lines=n_lines,
        label=section.label,
        envelope=section.envelope,
    )
    comb = generate_soliton_crystal_comb(
        center, fsr, n_lines, envelope=section.envelope, label=section.label
    )
    return comb, section


def cmd_shape(args) -> CommandOutcome:
    scenario = _load_scenario_arg(args)
    run = _Run(args, scenario)
    comb, comb_section = _comb_from_scenario(scenario, args)
    shaping = scenario.shaping if scenario is not None and scenario.shaping is not None else ShapingSection()
    actuator = ActuatorModel(
        gain_error=_pick(args.gain_error, shaping.actuator.gain_error, 0.0),
        quantization=_pick(args.quantization, shaping.actuator.quantization, 0.0),
        floor=_pick(args.floor, shaping.actuator.floor, 60.0),
    )
    max_spread = _pick(args.max_spread, shaping.max_spread_db, 15.0)
    tolerance = _pick(args.tolerance, shaping.tolerance_db, 0.1)
    max_iter = int(_pick(args.max_iter, shaping.max_iterations, 20))
    noise = _pick(args.noise, shaping.osa_noise_db, 0.0)

    coarse_plan = pre_shape(comb, max_spread)
    pre_shaped = apply_shaping(comb, coarse_plan)

    mode = args.targets
    if mode is None:
        has_design = (scenario is not None and scenario.design is not None) or args.kind is not None
        mode = "design" if has_design else "gaussian"
    if mode == "design":
        result, request = _design_from_args(args, scenario)
        coeffs = np.abs(result.taps.coefficients)
        n_taps = len(coeffs)
        if n_taps > pre_shaped.n_lines:
            raise ValidationError(
                f"design needs {n_taps} taps but the comb has only {pre_shaped.n_lines} lines"
            )
        wanted = set(range(-(n_taps // 2), n_taps - n_taps // 2))
        selected = tuple(int(i) for i in pre_shaped.indices if int(i) in wanted)
        if len(selected) != n_taps:
            raise ValidationError("comb does not contain the contiguous line block for the design")
        targets = coeffs / coeffs.max()
        target_origin = request["kind"]
    elif mode == "gaussian":
        selected = tuple(int(i) for i in pre_shaped.indices)
        sigma = len(selected) / 6.0
        targets = np.exp(-(np.array(selected, dtype=float) ** 2) / (2.0 * sigma**2))
        target_origin = "gaussian"
    else:
        selected = tuple(int(i) for i in pre_shaped.indices)
        targets = np.ones(len(selected))
        target_origin = "flat"

    plan, report = feedback_calibrate(
        pre_shaped,
        targets,
        actuator,
        osa_noise=noise,
        tolerance=tolerance,
        max_iter=max_iter,
        selected_indices=selected,
        seed=run.seed,
    )
    shaped = apply_shaping(pre_shaped, plan)

    write_csv(comb, run.path("comb.csv"))
    write_csv(shaped, run.path("shaped_comb.csv"))
    write_csv(report, run.path("calibration_trace.csv"))
    write_json(plan.to_json_dict(), run.path("shaping_plan.json"))
    report_doc = report.to_json_dict()
    report_doc["seed"] = run.seed
    write_json(report_doc, run.path("calibration_report.json"))
    if run.figures:
        plots.save_comb_figure(comb, run.path("comb.png"), title="Generated comb")
        plots.save_comb_figure(shaped, run.path("shaped_comb.png"),
                               title=f"Shaped comb ({target_origin} targets)")
        plots.save_trace_figure(report, run.path("calibration_trace.png"))
    run.note(
        f"shaped {len(selected)} lines to {target_origin} targets: "
        f"{'converged' if report.converged else 'NOT converged'} after "
        f"{report.iterations} iterations, final error {report.final_error:.4g} dB"
    )
    parameters = {
        "comb": {
            "center_frequency_hz": comb_section.center_frequency_hz,
            "fsr_hz": comb_section.fsr_hz,
            "n_lines": comb_section.n_lines,
        },
        "max_spread_db": max_spread,
        "tolerance_db": tolerance,
        "max_iterations": max_iter,
        "osa_noise_db": noise,
        "gain_error": actuator.gain_error,
        "quantization_db": actuator.quantization,
        "floor_db": actuator.floor,
        "targets": target_origin,
    }
    return run.finish("shape", parameters)


def cmd_beamform(args) -> CommandOutcome:
    scenario = _load_scenario_arg(args)
    run = _Run(args, scenario)
    section = (
        scenario.beamform
        if scenario is not None and scenario.beamform is not None
        else BeamformSection()
    )
    n_elements = int(_pick(args.elements, section.n_elements, 81))
    rf_frequency = _pick(args.rf_frequency, section.rf_frequency_hz, 10e9)
    spacing = _pick(args.spacing, section.element_spacing_m, None)
    angle_step = _pick(args.angle_step, section.angle_step_deg, 0.01)
    taus = args.tau if args.tau else (
        list(section.steering_delays_s)
        if section.steering_delays_s is not None
        else [section.inter_element_delay_s]
    )
    if args.sweep is not None:
        sweep_counts = [int(v) for v in args.sweep.split(",") if v]
    else:
        sweep_counts = list(section.element_sweep)

    grid = default_angle_grid(angle_step)
    patterns: list[tuple[str, ArrayPattern]] = []
    pattern_rows = []
    for i, tau in enumerate(taus):
        config = BeamformerConfig(
            n_elements=n_elements,
            rf_frequency=rf_frequency,
            element_spacing=spacing,
            inter_element_delay=tau,
        )
        angle = steering_angle(tau, config.element_spacing)
        pattern = array_factor(config, grid)
        width = beamwidth_3db(pattern)
        name = f"pattern_{i:02d}.csv"
        write_csv(pattern, run.path(name))
        patterns.append((f"tau={tau * 1e12:.2f} ps ({angle:.2f} deg)", pattern))
        pattern_rows.append((tau, angle, width))
        run.note(
            f"tau {tau * 1e12:.2f} ps: steering {angle:.2f} deg, beamwidth {width:.3f} deg"
        )
    write_csv_rows(
        run.path("steering_summary.csv"),
        ["tau_s", "steering_angle_deg", "beamwidth_deg"],
        pattern_rows,
    )

    sweep = beamwidth_vs_elements(
        sweep_counts, rf_frequency, element_spacing=spacing, angles_deg=grid
    )
    write_csv_rows(run.path("beamwidth_vs_elements.csv"), ["M", "theta_3db_deg"], sweep)
    for m, width in sweep:
        run.note(f"M={m}: beamwidth {width:.3f} deg")
    if run.figures:
        plots.save_pattern_figure(patterns, run.path("patterns.png"))
        plots.save_beamwidth_figure(sweep, run.path("beamwidth_vs_elements.png"))
    parameters = {
        "n_elements": n_elements,
        "rf_frequency_hz": rf_frequency,
        "element_spacing_m": spacing,
        "steering_delays_s": list(taus),
        "element_sweep": sweep_counts,
        "angle_step_deg": angle_step,
    }
    return run.finish("beamform", parameters)


def _parse_weights(text: str, n_channels: int) -> np.ndarray:
    parts = [p for p in text.split(",") if p != ""]
    weights = []
    for p in parts:
        if p not in ("0", "1"):
            raise ValidationError(f"--weights entries must be 0 or 1, got {p!r}")
        weights.append(int(p))
    if len(weights) != n_channels:
        raise ValidationError(f"{len(weights)} weights given for {n_channels} channels")
    return np.array(weights, dtype=int)


def cmd_channelize(args) -> CommandOutcome:
    scenario = _load_scenario_arg(args)
    run = _Run(args, scenario)
    section = (
        scenario.channelizer
        if scenario is not None and scenario.channelizer is not None
        else ChannelizerSection()
    )
    base = section.plan
    plan = ChannelPlan(
        comb_fsr=_pick(args.comb_fsr, base.comb_fsr, 49e9),
        filter_fsr=_pick(args.filter_fsr, base.filter_fsr, 49.2e9),
        n_channels=int(_pick(args.channels, base.n_channels, 20)),
        base_offset=_pick(args.base_offset, base.base_offset, 1e9),
        channel_bandwidth=_pick(args.channel_bw, base.channel_bandwidth, 0.2e9),
        lineshape=_pick(args.lineshape, base.lineshape, "lorentzian"),
        fwhm=_pick(args.fwhm, base.fwhm, None),
    )
    if args.weights is not None:
        weights = _parse_weights(args.weights, plan.n_channels)
    elif section.weights is not None:
        if len(section.weights) != plan.n_channels:
            raise ValidationError(
                f"scenario weights have {len(section.weights)} entries for "
                f"{plan.n_channels} channels"
            )
        weights = np.array(section.weights, dtype=int)
    else:
        weights = np.ones(plan.n_channels, dtype=int)

    centers = channel_centers(plan)
    input_power = _pick(args.input_power, section.input_power_dbm, 0.0)
    n_points = int(_pick(args.input_points, section.input_points, 4001))
    pad = plan.channel_bandwidth
    f_lo = _pick(args.f_min, section.input_f_min_hz, min(float(centers.min()) - pad, 0.0))
    f_hi = _pick(args.f_max, section.input_f_max_hz, float(centers.max()) + pad)
    if f_hi <= f_lo:
        raise ValidationError(f"input span is empty: f_min {f_lo:g} >= f_max {f_hi:g}")
    spectrum = Spectrum(
        np.linspace(f_lo, f_hi, n_points), np.full(n_points, float(input_power))
    )

    channelized = apply_binary_weights(slice_spectrum(plan, spectrum), weights)
    composite = reconstruct(channelized)

    write_csv_rows(
        run.path("channels_manifest.csv"),
        ["channel", "rf_center_hz", "weight"],
        ((seg.index, seg.rf_center, seg.weight) for seg in channelized.segments),
    )
    for seg in channelized.segments:
        with np.errstate(divide="ignore"):
            seg_db = 10.0 * np.log10(seg.power_linear)
        write_csv_rows(
            run.path(f"channel_{seg.index:03d}.csv"),
            ["frequency_hz", "power_db"],
            zip(channelized.frequencies, seg_db),
        )
    write_csv(composite, run.path("composite.csv"))

    # The paired comb view: channel k rides comb line k; off channels are
    # suppressed at the shaper, shown 60 dB down.
    n = plan.n_channels
    comb_rows = []
    for k in range(n):
        line_index = k - n // 2
        freq = 193.4e12 + line_index * plan.comb_fsr
        power = 0.0 if weights[k] else -60.0
        comb_rows.append((line_index, freq, power))
    write_csv_rows(run.path("comb_weights.csv"), ["index", "frequency_hz", "power_dbm"], comb_rows)

    if run.figures:
        plots.save_channelizer_figure(channelized, composite, run.path("channelizer.png"))
    run.note(
        f"{plan.n_channels} channels, step {plan.channel_step / 1e9:.3f} GHz, "
        f"operation bandwidth {operation_bandwidth(plan) / 1e9:.1f} GHz, "
        f"{int(weights.sum())} on / {int((1 - weights).sum())} off"
    )
    parameters = dict(plan.to_json_dict())
    parameters.update({
        "weights": [int(w) for w in weights],
        "input_power_dbm": input_power,
        "input_points": n_points,
    })
    return run.finish("channelize", parameters)


def cmd_simulate(args) -> CommandOutcome:
    scenario = load_scenario(args.scenario)
    run = _Run(args, scenario)
    files: list[str] = []
    summaries: list[str] = []
    sub_template = argparse.Namespace(**vars(args))
    ran = []
    if scenario.design is not None:
        sub = _namespace_for_design(sub_template)
        outcome = cmd_design(sub)
        files.extend(outcome.files)
        summaries.append(outcome.summary)
        ran.append("design")
    if scenario.comb is not None:
        sub = _namespace_for_shape(sub_template)
        outcome = cmd_shape(sub)
        files.extend(outcome.files)
        summaries.append(outcome.summary)
        ran.append("shape")
    if scenario.beamform is not None:
        sub = _namespace_for_beamform(sub_template)
        outcome = cmd_beamform(sub)
        files.extend(outcome.files)
        summaries.append(outcome.summary)
        ran.append("beamform")
    if scenario.channelizer is not None:
        sub = _namespace_for_channelize(sub_template)
        outcome = cmd_channelize(sub)
        files.extend(outcome.files)
        summaries.append(outcome.summary)
        ran.append("channelize")
    if not ran:
        raise ValidationError("scenario contains no runnable sections")
    run.files.extend(f for f in files if f != "manifest.json")
    run.lines.extend(summaries)
    return run.finish("simulate", {"sections": ran, "scenario": str(args.scenario)})


def _namespace_for_design(base) -> argparse.Namespace:
    ns = argparse.Namespace(**vars(base))
    for key, value in (
        ("kind", None), ("taps", None), ("bw", None), ("center", None), ("sigma", None),
        ("tap_spacing", None), ("dispersion", None), ("length", None),
        ("comb_fsr", None), ("comb_center", None),
    ):
        setattr(ns, key, value)
    return ns


def _namespace_for_shape(base) -> argparse.Namespace:
    ns = _namespace_for_design(base)
    for key, value in (
        ("lines", None), ("max_spread", None), ("tolerance", None), ("max_iter", None),
        ("gain_error", None), ("quantization", None), ("floor", None), ("noise", None),
        ("targets", None),
    ):
        setattr(ns, key, value)
    return ns


def _namespace_for_beamform(base) -> argparse.Namespace:
    ns = argparse.Namespace(**vars(base))
    for key, value in (
        ("elements", None), ("spacing", None), ("rf_frequency", None),
        ("tau", None), ("sweep", None), ("angle_step", None),
    ):
        setattr(ns, key, value)
    return ns


def _namespace_for_channelize(base) -> argparse.Namespace:
    ns = argparse.Namespace(**vars(base))
    for key, value in (
        ("comb_fsr", None), ("filter_fsr", None), ("channels", None),
        ("base_offset", None), ("channel_bw", None), ("lineshape", None),
        ("fwhm", None), ("weights", None), ("input_power", None), ("input_points", None),
        ("f_min", None), ("f_max", None),
    ):
        setattr(ns, key, value)
    return ns


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="combrf",
        description="Microcomb-based photonic RF signal processing simulator",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--scenario", type=Path, default=None, help="scenario JSON file")
    common.add_argument("--out", type=Path, default=None, help="output directory (default: out)")
    common.add_argument("--seed", type=int, default=None, help="RNG seed override")
    common.add_argument("--no-figures", action="store_true", help="skip PNG rendering")

    sub = parser.add_subparsers(dest="command", required=True)

    p_design = sub.add_parser("design", parents=[common],
                              help="design tap weights and report the RF response")
    p_design.add_argument("kind", nargs="?", default=None,
                          choices=("sinc", "hilbert", "differentiator"),
                          help="filter kind (defaults to the scenario design section)")
    p_design.add_argument("--taps", type=int, default=None, help="number of taps")
    p_design.add_argument("--bw", type=float, default=None, help="bandwidth in Hz (sinc)")
    p_design.add_argument("--center", type=float, default=None, help="center frequency in Hz (sinc)")
    p_design.add_argument("--sigma", type=float, default=None,
                          help="Gaussian apodization width in taps (sinc; default n_taps/6)")
    _add_spacing_flags(p_design)
    p_design.set_defaults(func=cmd_design)

    p_shape = sub.add_parser("shape", parents=[common],
                             help="shape a comb to target weights with feedback calibration")
    p_shape.add_argument("--lines", type=int, default=None, help="number of comb lines")
    p_shape.add_argument("--max-spread", dest="max_spread", type=float, default=None,
                         help="pre-shape spread ceiling in dB")
    p_shape.add_argument("--tolerance", type=float, default=None, help="calibration tolerance in dB")
    p_shape.add_argument("--max-iter", dest="max_iter", type=int, default=None,
                         help="calibration iteration limit")
    p_shape.add_argument("--gain-error", dest="gain_error", type=float, default=None,
                         help="actuator fractional gain error")
    p_shape.add_argument("--quantization", type=float, default=None,
                         help="actuator attenuation step in dB")
    p_shape.add_argument("--floor", type=float, default=None, help="actuator max attenuation in dB")
    p_shape.add_argument("--noise", type=float, default=None,
                         help="measurement noise std in dB")
    p_shape.add_argument("--targets", choices=("design", "gaussian", "flat"), default=None,
                         help="target weights: a design, a Gaussian apodization profile "
                              "(default without a design), or flat")
    p_shape.add_argument("--kind", default=None,
                         choices=("sinc", "hilbert", "differentiator"),
                         help="design targets to shape to (overrides scenario)")
    p_shape.add_argument("--taps", type=int, default=None, help="design tap count")
    p_shape.add_argument("--bw", type=float, default=None, help="design bandwidth in Hz")
    p_shape.add_argument("--center", type=float, default=None, help="design center in Hz")
    p_shape.add_argument("--sigma", type=float, default=None, help="design apodization width")
    _add_spacing_flags(p_shape)
    p_shape.set_defaults(func=cmd_shape)

    p_beam = sub.add_parser("beamform", parents=[common],
                            help="array patterns, steering angles, beamwidth sweep")
    p_beam.add_argument("--elements", type=int, default=None, help="number of radiating elements")
    p_beam.add_argument("--spacing", type=float, default=None,
                        help="element spacing in m (default: half wavelength)")
    p_beam.add_argument("--rf-frequency", dest="rf_frequency", type=float, default=None,
                        help="RF carrier in Hz")
    p_beam.add_argument("--tau", type=float, action="append", default=None,
                        help="inter-element delay in s (repeatable)")
    p_beam.add_argument("--sweep", type=str, default=None,
                        help="comma-separated element counts for the beamwidth sweep")
    p_beam.add_argument("--angle-step", dest="angle_step", type=float, default=None,
                        help="angle grid step in degrees")
    p_beam.set_defaults(func=cmd_beamform)

    p_chan = sub.add_parser("channelize", parents=[common],
                            help="Vernier channelization with binary channel weights")
    p_chan.add_argument("--comb-fsr", dest="comb_fsr", type=float, default=None,
                        help="comb FSR in Hz")
    p_chan.add_argument("--filter-fsr", dest="filter_fsr", type=float, default=None,
                        help="slicing filter FSR in Hz")
    p_chan.add_argument("--channels", type=int, default=None, help="number of channels")
    p_chan.add_argument("--base-offset", dest="base_offset", type=float, default=None,
                        help="RF center of channel 0 in Hz")
    p_chan.add_argument("--channel-bw", dest="channel_bw", type=float, default=None,
                        help="per-channel bandwidth in Hz")
    p_chan.add_argument("--lineshape", default=None, choices=("rectangular", "lorentzian"))
    p_chan.add_argument("--fwhm", type=float, default=None, help="lorentzian FWHM in Hz")
    p_chan.add_argument("--weights", type=str, default=None,
                        help="comma-separated binary channel weights, e.g. 1,1,0,1")
    p_chan.add_argument("--input-power", dest="input_power", type=float, default=None,
                        help="flat input spectrum level in dB")
    p_chan.add_argument("--input-points", dest="input_points", type=int, default=None,
                        help="input spectrum grid points")
    p_chan.add_argument("--f-min", dest="f_min", type=float, default=None,
                        help="input spectrum grid start in Hz (default: covers all channels)")
    p_chan.add_argument("--f-max", dest="f_max", type=float, default=None,
                        help="input spectrum grid end in Hz (default: covers all channels)")
    p_chan.set_defaults(func=cmd_channelize)

    p_sim = sub.add_parser("simulate", parents=[common],
                           help="run every section of a scenario file")
    p_sim.set_defaults(func=cmd_simulate)
    return parser


def _add_spacing_flags(p: argparse.ArgumentParser):
    p.add_argument("--tap-spacing", dest="tap_spacing", type=float, default=None,
                   help="inter-tap delay T in seconds (overrides the dispersion route)")
    p.add_argument("--dispersion", type=float, default=None,
                   help="dispersion in ps/(nm km), default 17")
    p.add_argument("--length", type=float, default=None, help="fiber length in km, default 4")
    p.add_argument("--comb-fsr", dest="comb_fsr", type=float, default=None,
                   help="comb FSR in Hz, default 49e9")
    p.add_argument("--comb-center", dest="comb_center", type=float, default=None,
                   help="comb center frequency in Hz, default 193.4e12")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "simulate" and args.scenario is None:
        parser.error("simulate requires --scenario")
    try:
        outcome = args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except InfeasibleError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 4
    print(outcome.summary)
    return outcome.exit_code


if __name__ == "__main__":
    sys.exit(main())
