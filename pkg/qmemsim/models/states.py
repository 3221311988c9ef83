"""Per-trajectory state records: Gaussian moments and the classical circuit."""

import math
from dataclasses import asdict, dataclass, fields
from typing import Any, Dict, Mapping, Type, TypeVar

from qmemsim.models.errors import ConfigError, NonPositiveVariance

# Heisenberg bound on det of the (phi, q) covariance matrix in vacuum units.
UNCERTAINTY_BOUND = 0.25

_S = TypeVar("_S", "GaussianState", "ClassicalState")


def _from_mapping(cls: Type[_S], data: Mapping[str, Any]) -> _S:
    names = [f.name for f in fields(cls)]
    unknown = sorted(set(data) - set(names))
    if unknown:
        raise ConfigError(f"unknown {cls.__name__} field(s): {', '.join(unknown)}")
    missing = [n for n in names if n not in data]
    if missing:
        raise ConfigError(f"missing {cls.__name__} field(s): {', '.join(missing)}")
    return cls(**{n: float(data[n]) for n in names})


@dataclass(frozen=True)
class GaussianState:
    """First and second moments of (phi, q) plus the memristor state variable."""

    mean_phi: float
    mean_q: float
    var_phi: float
    var_q: float
    cov: float
    mu: float

    @property
    def uncertainty_product(self) -> float:
        """var_phi * var_q - cov**2, bounded below by 1/4 for physical states."""
        return self.var_phi * self.var_q - self.cov**2

    def check(self, time: float = 0.0) -> "GaussianState":
        """Raise NonPositiveVariance unless both variances are positive."""
        for name in ("var_phi", "var_q"):
            value = getattr(self, name)
            if not value > 0:
                raise NonPositiveVariance(name, time, value)
        return self

    def to_dict(self) -> Dict[str, float]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "GaussianState":
        return _from_mapping(cls, data)


@dataclass(frozen=True)
class ClassicalState:
    """Flux, charge and state variable of the classical circuit."""

    phi: float
    q: float
    mu: float

    def __post_init__(self) -> None:
        for f in fields(self):
            if not math.isfinite(getattr(self, f.name)):
                raise ValueError(f"ClassicalState.{f.name} must be finite")

    @property
    def energy(self) -> float:
        return 0.5 * (self.q**2 + self.phi**2)

    def to_dict(self) -> Dict[str, float]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "ClassicalState":
        return _from_mapping(cls, data)
