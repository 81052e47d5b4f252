"""Topological phases of dyons around a dual (electric and magnetic) solenoid."""

from .core import (
    AxisSingularityError,
    BoundaryAmbiguityError,
    DegenerateReductionError,
    DyonCharge,
    DyonPhaseError,
    InternalConsistencyError,
    NumericFailureError,
    ParameterError,
    PathCrossesSolenoidError,
    PhysicalConstants,
    Position,
    SolenoidConfig,
    UndersampledPathError,
)
from .duality import DualityAngle, DualityFrame, rotate
from .interference import FringePattern, TwoSlitGeometry
from .paths import PhaseResult, SampledPath, accumulate_phase, winding_number
from .ring import RingConfig, RingSpectrum

__version__ = "0.1.0"
