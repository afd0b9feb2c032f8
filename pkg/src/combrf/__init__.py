"""Microcomb-based photonic RF signal processing simulation toolkit."""

from .beamform import (
    ArrayPattern,
    BeamformerConfig,
    array_factor,
    beamwidth_3db,
    beamwidth_vs_elements,
    steering_angle,
    true_time_delays,
)
from .channelizer import (
    ChannelizedSpectrum,
    ChannelPlan,
    ChannelSegment,
    apply_binary_weights,
    channel_centers,
    operation_bandwidth,
    reconstruct,
    slice_spectrum,
)
from .comb import (
    CombLine,
    CombSpec,
    EnvelopeParams,
    dbm_to_mw,
    fsr_to_wavelength_spacing,
    generate_soliton_crystal_comb,
    mw_to_dbm,
)
from .constants import SPEED_OF_LIGHT
from .designs import (
    BandpassDesign,
    DesignResult,
    differentiator_taps,
    hilbert_taps,
    sinc_bandpass_taps,
)
from .errors import (
    BandwidthUnresolvedError,
    BeamwidthUnresolvedError,
    CombRfError,
    CoverageError,
    DegenerateDelayError,
    DesignInfeasibleError,
    InfeasibleError,
    InvalidPlanError,
    SampleAlignmentError,
    UnreachableSteeringError,
    UnreachableTargetError,
    ValidationError,
)
from .scenario import ScenarioConfig, load_scenario, save_scenario
from .shaper import (
    ActuatorModel,
    CalibrationReport,
    ShapingPlan,
    apply_shaping,
    feedback_calibrate,
    pre_shape,
    solve_attenuations,
)
from .sigio import Spectrum, Waveform, write_csv, write_csv_rows
from .transversal import (
    DispersionLink,
    RfResponse,
    TapWeights,
    apply_to_waveform,
    q_rf,
    rf_fsr,
    sidelobe_level,
    tap_spacing,
    transfer_function,
)

__version__ = "0.1.0"

__all__ = [
    "ActuatorModel",
    "ArrayPattern",
    "BandpassDesign",
    "BandwidthUnresolvedError",
    "BeamformerConfig",
    "BeamwidthUnresolvedError",
    "CalibrationReport",
    "ChannelizedSpectrum",
    "ChannelPlan",
    "ChannelSegment",
    "CombLine",
    "CombRfError",
    "CombSpec",
    "CoverageError",
    "DegenerateDelayError",
    "DesignInfeasibleError",
    "DesignResult",
    "DispersionLink",
    "EnvelopeParams",
    "InfeasibleError",
    "InvalidPlanError",
    "RfResponse",
    "SampleAlignmentError",
    "ScenarioConfig",
    "ShapingPlan",
    "Spectrum",
    "SPEED_OF_LIGHT",
    "TapWeights",
    "UnreachableSteeringError",
    "UnreachableTargetError",
    "ValidationError",
    "Waveform",
    "apply_binary_weights",
    "apply_shaping",
    "apply_to_waveform",
    "array_factor",
    "beamwidth_3db",
    "beamwidth_vs_elements",
    "channel_centers",
    "dbm_to_mw",
    "differentiator_taps",
    "feedback_calibrate",
    "fsr_to_wavelength_spacing",
    "generate_soliton_crystal_comb",
    "hilbert_taps",
    "load_scenario",
    "mw_to_dbm",
    "operation_bandwidth",
    "pre_shape",
    "q_rf",
    "reconstruct",
    "rf_fsr",
    "save_scenario",
    "sidelobe_level",
    "sinc_bandpass_taps",
    "slice_spectrum",
    "solve_attenuations",
    "steering_angle",
    "tap_spacing",
    "transfer_function",
    "true_time_delays",
    "write_csv",
    "write_csv_rows",
]
