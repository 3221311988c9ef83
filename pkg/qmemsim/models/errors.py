"""Exception hierarchy for qmemsim.

ConfigError subclasses map to CLI exit code 1; SimulationError and
AnalysisError subclasses map to exit code 2.
"""

from typing import Optional, Sequence


class QMemSimError(Exception):
    """Base class for every error raised by qmemsim."""


class ConfigError(QMemSimError):
    """Invalid parameter file, preset or override."""


class ParameterError(ConfigError):
    """One or more SimParams bounds are violated."""

    def __init__(self, violations: Sequence[str]):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class SimulationError(QMemSimError):
    """Failure while integrating trajectories."""


class NonPositiveVariance(SimulationError):
    """A variance left the positive half-line; dt is too large for the dynamics."""

    def __init__(
        self,
        field: str,
        time: float,
        value: float,
        trajectory_index: Optional[int] = None,
    ):
        self.field = field
        self.time = time
        self.value = value
        self.trajectory_index = trajectory_index
        where = "" if trajectory_index is None else f" in trajectory {trajectory_index}"
        super().__init__(
            f"{field} became non-positive ({value!r}) at t={time:.6g}{where}; "
            "reduce dt"
        )


class EnsembleError(SimulationError):
    """At least one trajectory of an ensemble aborted."""

    def __init__(self, failures: Sequence[SimulationError]):
        self.failures = list(failures)
        first = self.failures[0] if self.failures else None
        super().__init__(
            f"{len(self.failures)} trajectory batch(es) failed; first: {first}"
        )


class AnalysisError(QMemSimError):
    """Failure while reducing simulation output to derived quantities."""


class DegenerateCurve(AnalysisError):
    """A hysteresis curve has too few samples or no zero crossing."""


class BracketError(AnalysisError):
    """The noise sum is not unimodal on the requested bracket."""
