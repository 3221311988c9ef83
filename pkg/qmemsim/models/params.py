"""Simulation parameter record and its validation.

All quantities are adimensional: frequencies in units of the circuit
frequency, times in units of its inverse, charge and flux in units of their
vacuum fluctuations.
"""

import math
from dataclasses import dataclass, fields
from typing import Any, Dict, List, Mapping

from qmemsim.models.errors import ConfigError, ParameterError

SEED_LIMIT = 2**64

# JSON key -> attribute name; "lambda" is a Python keyword.
_KEY_TO_ATTR = {"lambda": "lambda_"}
_ATTR_TO_KEY = {v: k for k, v in _KEY_TO_ATTR.items()}
_INT_FIELDS = {"n_traj", "master_seed", "record_stride"}


@dataclass(frozen=True)
class SimParams:
    """Physical and numerical parameters of one experiment."""

    gamma0: float
    epsilon: float
    lambda_: float
    nu: float
    tau: float
    dt: float = 1e-3
    t_final: float = 6.0 * math.pi
    n_traj: int = 3000
    master_seed: int = 1
    record_stride: int = 10

    @property
    def n_steps(self) -> int:
        """Number of integration steps, floor(t_final / dt)."""
        return int(math.floor(self.t_final / self.dt + 1e-9))

    @property
    def n_records(self) -> int:
        """Number of stored samples, including t = 0."""
        return self.n_steps // self.record_stride + 1

    @property
    def record_interval(self) -> float:
        return self.record_stride * self.dt

    def to_dict(self) -> Dict[str, Any]:
        """Flat mapping with the parameter-file key names."""
        return {_ATTR_TO_KEY.get(f.name, f.name): getattr(self, f.name) for f in fields(self)}

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "SimParams":
        """Build from a flat mapping; unknown keys are a ConfigError.

        Missing keys fall back to the dataclass defaults, which only exist for
        the numerical fields.
        """
        known = {_ATTR_TO_KEY.get(f.name, f.name) for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(f"unknown parameter(s): {', '.join(unknown)}")
        kwargs: Dict[str, Any] = {}
        for key, value in data.items():
            attr = _KEY_TO_ATTR.get(key, key)
            kwargs[attr] = _coerce(attr, value)
        try:
            return cls(**kwargs)
        except TypeError as e:
            raise ConfigError(f"incomplete parameter set: {e}") from e

    def with_overrides(self, overrides: Mapping[str, Any]) -> "SimParams":
        """Return a copy with the given parameter-file keys replaced."""
        merged = self.to_dict()
        merged.update(overrides)
        return SimParams.from_dict(merged)


def _coerce(attr: str, value: Any) -> Any:
    if isinstance(value, bool):
        raise ConfigError(f"{_ATTR_TO_KEY.get(attr, attr)} must be numeric, got {value!r}")
    try:
        if attr in _INT_FIELDS:
            if isinstance(value, int):
                return value
            as_float = float(value)
            if not as_float.is_integer():
                raise ValueError(value)
            return int(as_float)
        return float(value)
    except (TypeError, ValueError) as e:
        kind = "an integer" if attr in _INT_FIELDS else "a number"
        raise ConfigError(
            f"{_ATTR_TO_KEY.get(attr, attr)} must be {kind}, got {value!r}"
        ) from e


def validate(params: SimParams) -> SimParams:
    """Return params unchanged if every bound holds, else raise ParameterError.

    Every violated bound is reported, each message naming its field.
    """
    violations: List[str] = []
    if not params.gamma0 >= 0:
        violations.append("gamma0 must be non-negative")
    if not 0 <= params.epsilon <= 1:
        violations.append("epsilon out of [0,1]")
    if not params.lambda_ > 0:
        violations.append("lambda must be positive")
    if not params.nu >= 0:
        violations.append("nu must be non-negative")
    if not params.tau > 0:
        violations.append("tau must be positive")
    if not params.dt > 0:
        violations.append("dt must be positive")
    if not (math.isfinite(params.t_final) and params.t_final >= params.dt):
        violations.append("t_final must be finite and at least dt")
    if params.n_traj < 1:
        violations.append("n_traj must be at least 1")
    if not 0 <= params.master_seed < SEED_LIMIT:
        violations.append("master_seed must fit in 64 unsigned bits")
    if params.record_stride < 1:
        violations.append("record_stride must be at least 1")
    for name in ("gamma0", "epsilon", "lambda_", "nu", "tau", "dt"):
        if not math.isfinite(getattr(params, name)):
            violations.append(f"{_ATTR_TO_KEY.get(name, name)} must be finite")
    if violations:
        raise ParameterError(violations)
    return params

