"""Per-line comb shaping: pre-shape, exact attenuation solve, feedback loop.

Shaping is attenuation-only (a shaper removes power). The pipeline mirrors
a two-stage programmable filter: a coarse pre-shape first compresses the
line-power spread, then a second stage sets the exact tap weights, with an
optional closed-loop calibration against a noisy measurement through an
imperfect actuator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .comb import CombLine, CombSpec
from .errors import UnreachableTargetError, ValidationError


@dataclass(frozen=True)
class ActuatorModel:
    """Imperfections of the attenuation actuator.

    gain_error is the fractional multiplicative error on each commanded dB;
    quantization is the attenuation step size in dB (0 for continuous);
    floor is the maximum attenuation the device can apply.
    """

    gain_error: float = 0.0
    quantization: float = 0.0  # dB
    floor: float = 60.0        # dB

    def __post_init__(self):
        if not math.isfinite(self.gain_error) or self.gain_error <= -1.0:
            raise ValidationError(f"gain_error must be finite and > -1, got {self.gain_error!r}")
        if not math.isfinite(self.quantization) or self.quantization < 0.0:
            raise ValidationError(f"quantization >= 0 required, got {self.quantization!r}")
        if not math.isfinite(self.floor) or self.floor <= 0.0:
            raise ValidationError(f"floor > 0 required, got {self.floor!r}")

    def realize(self, commanded: np.ndarray) -> np.ndarray:
        """Attenuation actually applied for a commanded attenuation vector."""
        actual = commanded * (1.0 + self.gain_error)
        if self.quantization > 0.0:
            actual = np.round(actual / self.quantization) * self.quantization
        return np.clip(actual, 0.0, self.floor)


@dataclass(frozen=True)
class ShapingPlan:
    """Target weights and per-line attenuations for selected comb lines.

    target_weights are linear and normalized to max 1. attenuations are in
    dB, all >= 0; +inf marks a line that must be fully extinguished (target
    weight 0). unusable_indices flags lines too weak to join the shaped
    power window, left untouched by pre-shaping.
    """

    selected_indices: tuple[int, ...]
    target_weights: np.ndarray
    attenuations: np.ndarray
    unusable_indices: tuple[int, ...] = ()

    def __post_init__(self):
        targets = np.asarray(self.target_weights, dtype=float)
        attens = np.asarray(self.attenuations, dtype=float)
        indices = tuple(int(i) for i in self.selected_indices)
        if len(set(indices)) != len(indices):
            raise ValidationError("selected_indices must be distinct")
        if targets.shape != (len(indices),) or attens.shape != (len(indices),):
            raise ValidationError(
                "target_weights and attenuations must match selected_indices in length"
            )
        if len(indices) == 0:
            raise ValidationError("plan must select at least one line")
        if np.any(np.isnan(targets)) or np.any(targets < 0.0) or np.any(np.isinf(targets)):
            raise ValidationError("target_weights must be finite and >= 0")
        peak = targets.max()
        if not math.isclose(peak, 1.0, rel_tol=1e-9):
            raise ValidationError(f"target_weights must be normalized to max 1, got max {peak}")
        if np.any(np.isnan(attens)) or np.any(attens < 0.0):
            raise ValidationError("attenuations must be >= 0")
        unusable = tuple(int(i) for i in self.unusable_indices)
        if set(unusable) - set(indices):
            raise ValidationError("unusable_indices must be a subset of selected_indices")
        targets = targets.copy()
        attens = attens.copy()
        targets.flags.writeable = False
        attens.flags.writeable = False
        object.__setattr__(self, "selected_indices", indices)
        object.__setattr__(self, "target_weights", targets)
        object.__setattr__(self, "attenuations", attens)
        object.__setattr__(self, "unusable_indices", unusable)

    def to_json_dict(self) -> dict:
        return {
            "selected_indices": list(self.selected_indices),
            "target_weights": [float(t) for t in self.target_weights],
            # +inf (fully extinguished line) is stored as null
            "attenuations_db": [
                float(a) if math.isfinite(a) else None for a in self.attenuations
            ],
            "unusable_indices": list(self.unusable_indices),
        }


@dataclass(frozen=True)
class CalibrationReport:
    """Trace of the feedback loop: per-iteration max |error| in dB."""

    iterations: int
    final_error: float
    error_trace: tuple[float, ...]
    converged: bool

    def __post_init__(self):
        trace = tuple(float(e) for e in self.error_trace)
        if len(trace) != self.iterations:
            raise ValidationError("error_trace length must equal iterations")
        if self.iterations < 1:
            raise ValidationError("report needs at least one iteration")
        if trace[-1] != self.final_error:
            raise ValidationError("final_error must equal the last trace entry")
        object.__setattr__(self, "error_trace", trace)

    def to_json_dict(self) -> dict:
        return {
            "iterations": self.iterations,
            "final_error_db": self.final_error,
            "error_trace_db": list(self.error_trace),
            "converged": self.converged,
        }


def pre_shape(comb: CombSpec, max_spread: float) -> ShapingPlan:
    """Compress the comb's line-power spread to max_spread dB.

    Lines are clustered by walking down the sorted powers: a line more than
    max_spread below the line above it cannot join the shaped window
    without dragging the whole comb down, so it is flagged unusable and
    left untouched. Within the cluster, only lines above (min + max_spread)
    are attenuated, down to that ceiling, which minimizes total attenuation
    while keeping the cluster spread at or below max_spread.
    """
    if not math.isfinite(max_spread) or max_spread <= 0.0:
        raise ValidationError(f"max_spread > 0 required, got {max_spread!r}")
    powers = comb.powers_dbm
    order = np.argsort(powers)[::-1]
    usable = np.zeros(len(powers), dtype=bool)
    usable[order[0]] = True
    prev_power = powers[order[0]]
    cluster_min = prev_power
    for pos in order[1:]:
        if prev_power - powers[pos] > max_spread:
            break
        usable[pos] = True
        prev_power = powers[pos]
        cluster_min = powers[pos]
    ceiling = cluster_min + max_spread
    attens = np.where(usable, np.maximum(0.0, powers - ceiling), 0.0)
    shaped = powers - attens
    weights = 10.0 ** ((shaped - shaped.max()) / 10.0)
    unusable = tuple(int(i) for i, ok in zip(comb.indices, usable) if not ok)
    return ShapingPlan(
        selected_indices=tuple(int(i) for i in comb.indices),
        target_weights=weights,
        attenuations=attens,
        unusable_indices=unusable,
    )


def _selected_powers(comb: CombSpec, selected_indices) -> np.ndarray:
    by_index = {line.index: line.power for line in comb.lines}
    powers = []
    for idx in selected_indices:
        if idx not in by_index:
            raise ValidationError(f"comb has no line with index {idx}")
        powers.append(by_index[idx])
    return np.asarray(powers, dtype=float)


def _normalized_targets(target_weights) -> np.ndarray:
    targets = np.asarray(target_weights, dtype=float)
    if targets.ndim != 1 or len(targets) == 0:
        raise ValidationError("target_weights must be a non-empty 1-D vector")
    if np.any(~np.isfinite(targets)) or np.any(targets < 0.0):
        raise ValidationError("target_weights must be finite and >= 0")
    peak = targets.max()
    if peak <= 0.0:
        raise ValidationError("target_weights must contain at least one positive entry")
    return targets / peak


def solve_attenuations(
    comb: CombSpec, target_weights, selected_indices=None
) -> ShapingPlan:
    """Exact open-loop attenuations realizing the target weights.

    Targets are normalized to max 1; the shaped peak is pinned at the
    strongest selected line, so attenuation_i = 10 log10(q_i / t_i) with
    q_i the line's linear power relative to that peak. A line with
    q_i < t_i cannot be realized by attenuation alone and raises
    UnreachableTargetError naming the line. Zero targets map to +inf
    attenuation (the line is extinguished).
    """
    targets = _normalized_targets(target_weights)
    if selected_indices is None:
        selected_indices = tuple(int(i) for i in comb.indices)
    else:
        selected_indices = tuple(int(i) for i in selected_indices)
    if len(selected_indices) != len(targets):
        raise ValidationError(
            f"{len(targets)} targets for {len(selected_indices)} selected lines"
        )
    powers = _selected_powers(comb, selected_indices)
    relative = powers - powers.max()  # dB below the strongest selected line
    with np.errstate(divide="ignore"):
        target_db = 10.0 * np.log10(targets)
    attens = relative - target_db  # +inf where target is 0
    shortfall = np.nonzero(attens < -1e-9)[0]
    if len(shortfall):
        worst = int(shortfall[np.argmin(attens[shortfall])])
        raise UnreachableTargetError(
            selected_indices[worst],
            f"line {selected_indices[worst]} is {-attens[worst]:.3f} dB too weak for its "
            "target weight; targets are unreachable by attenuation alone",
        )
    attens = np.maximum(attens, 0.0)  # clip -0.0 / rounding residue at the binding line
    return ShapingPlan(selected_indices, targets, attens)


def apply_shaping(comb: CombSpec, plan: ShapingPlan) -> CombSpec:
    """Comb after the plan's attenuations; lines not selected are blocked.

    Lines with infinite attenuation (zero target weight) are extinguished
    and dropped from the result, since a comb line cannot carry zero power
    in dBm.
    """
    atten_by_index = dict(zip(plan.selected_indices, plan.attenuations))
    lines = []
    for line in comb.lines:
        if line.index not in atten_by_index:
            continue
        atten = atten_by_index[line.index]
        if math.isinf(atten):
            continue
        lines.append(CombLine(line.index, line.frequency, line.power - atten))
    if len(lines) < 2:
        raise ValidationError("shaping would leave fewer than 2 comb lines")
    return CombSpec(comb.center_frequency, comb.fsr, tuple(lines), label=comb.label)


def feedback_calibrate(
    comb: CombSpec,
    target_weights,
    actuator: ActuatorModel,
    osa_noise: float = 0.0,
    tolerance: float = 0.1,
    max_iter: int = 20,
    selected_indices=None,
    seed: int | None = None,
) -> tuple[ShapingPlan, CalibrationReport]:
    """Close the loop: command, measure, correct, until within tolerance.

    Each iteration commands the current attenuations through the imperfect
    actuator, reads the shaped line powers with additive Gaussian dB noise
    of std osa_noise, forms per-line errors measured(dB) - target(dB), and
    adds the error to the next command (unit-gain integral control; dB
    errors are additive, which keeps the loop linear). Stops when
    max |error| <= tolerance or after max_iter iterations; non-convergence
    is reported, not raised.

    Returns the plan holding the final commanded attenuations and the
    calibration report. Lines with zero target weight are pinned at the
    actuator floor and excluded from the error metric.
    """
    if not math.isfinite(tolerance) or tolerance <= 0.0:
        raise ValidationError(f"tolerance > 0 required, got {tolerance!r}")
    if max_iter < 1:
        raise ValidationError(f"max_iter >= 1 required, got {max_iter}")
    if not math.isfinite(osa_noise) or osa_noise < 0.0:
        raise ValidationError(f"osa_noise >= 0 required, got {osa_noise!r}")

    ideal = solve_attenuations(comb, target_weights, selected_indices)
    powers = _selected_powers(comb, ideal.selected_indices)
    targets = ideal.target_weights
    active = targets > 0.0
    with np.errstate(divide="ignore"):
        target_db = powers.max() + 10.0 * np.log10(targets)

    rng = np.random.default_rng(seed)
    commanded = np.where(active, np.minimum(ideal.attenuations, actuator.floor), actuator.floor)
    trace = []
    converged = False
    for _ in range(max_iter):
        actual = actuator.realize(commanded)
        measured = powers - actual
        if osa_noise > 0.0:
            measured = measured + rng.normal(0.0, osa_noise, size=len(measured))
        error = measured[active] - target_db[active]
        max_error = float(np.abs(error).max())
        trace.append(max_error)
        if max_error <= tolerance:
            converged = True
            break
        update = commanded[active] + error
        commanded = commanded.copy()
        commanded[active] = np.clip(update, 0.0, actuator.floor)
    plan = ShapingPlan(
        ideal.selected_indices,
        targets,
        commanded,
        unusable_indices=ideal.unusable_indices,
    )
    report = CalibrationReport(
        iterations=len(trace),
        final_error=trace[-1],
        error_trace=tuple(trace),
        converged=converged,
    )
    return plan, report
