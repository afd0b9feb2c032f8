"""Exception hierarchy shared by every module.

The CLI maps these onto exit codes: ValidationError and subclasses exit 2,
InfeasibleError and subclasses exit 3, I/O failures exit 4.
"""


class CombRfError(Exception):
    """Base class for all toolkit errors."""


class ValidationError(CombRfError, ValueError):
    """Invalid argument, violated type invariant, or malformed input file."""


class InvalidPlanError(ValidationError):
    """Channel plan maps a channel to a negative RF center frequency."""


class InfeasibleError(CombRfError):
    """Well-formed request that cannot be realized numerically or physically."""


class UnreachableTargetError(InfeasibleError):
    """A comb line is too weak to realize its target weight by attenuation."""

    def __init__(self, line_index: int, message: str):
        super().__init__(message)
        self.line_index = line_index


class DegenerateDelayError(InfeasibleError):
    """Dispersion link yields zero inter-tap delay; taps would coincide."""


class SampleAlignmentError(InfeasibleError):
    """Tap spacing is not an integer number of samples at the given rate."""


class BandwidthUnresolvedError(InfeasibleError):
    """No -3 dB crossings bracketing the requested passband on the grid."""


class DesignInfeasibleError(InfeasibleError):
    """Requested filter parameters violate the Nyquist bounds set by 1/T."""


class UnreachableSteeringError(InfeasibleError):
    """Inter-element delay implies |sin| > 1; no physical steering angle."""


class BeamwidthUnresolvedError(InfeasibleError):
    """Pattern has no -3 dB crossings on both sides of its peak."""


class CoverageError(InfeasibleError):
    """Input spectrum grid does not cover a channel passband."""

    def __init__(self, channel: int, message: str):
        super().__init__(message)
        self.channel = channel
