"""Parameter, state and record types shared by every qmemsim module."""

from qmemsim.models.errors import (
    AnalysisError,
    BracketError,
    ConfigError,
    DegenerateCurve,
    EnsembleError,
    NonPositiveVariance,
    ParameterError,
    QMemSimError,
    SimulationError,
)
from qmemsim.models.params import SimParams, validate
from qmemsim.models.records import (
    ClassicalTrajectory,
    EnsembleStats,
    HysteresisCurve,
    Lobe,
    TrajectoryRecord,
)
from qmemsim.models.states import ClassicalState, GaussianState

__all__ = [
    "AnalysisError",
    "BracketError",
    "ClassicalState",
    "ClassicalTrajectory",
    "ConfigError",
    "DegenerateCurve",
    "EnsembleError",
    "EnsembleStats",
    "GaussianState",
    "HysteresisCurve",
    "Lobe",
    "NonPositiveVariance",
    "ParameterError",
    "QMemSimError",
    "SimParams",
    "SimulationError",
    "TrajectoryRecord",
    "validate",
]
