"""Diagnostics of the memory and of the measurement regime: collapse of the
hysteresis, the memory-window and localization conditions, squeezing-axis
oscillations and the non-pinching of the ensemble loop."""

import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from qmemsim.config import MEMORY_RATIO_LIMIT, logger
from qmemsim.models.errors import ConfigError
from qmemsim.models.params import SimParams
from qmemsim.models.records import EnsembleStats, TrajectoryRecord
from qmemsim.services.physics.ensemble import factorization_deviation
from qmemsim.utils.numerics import sign_change_times

TWO_PI = 2.0 * math.pi


def collapse_time(stats: EnsembleStats) -> Optional[float]:
    """Earliest time at which the spread of mu reaches 2 pi, or None."""
    spread = np.sqrt(np.maximum(stats.var_mu, 0.0))
    above = np.flatnonzero(spread >= TWO_PI)
    if above.size == 0:
        return None
    k = int(above[0])
    if k == 0:
        return float(stats.times[0])
    s0, s1 = spread[k - 1], spread[k]
    f = (TWO_PI - s0) / (s1 - s0)
    return float(stats.times[k - 1] + f * (stats.times[k] - stats.times[k - 1]))


def typical_charge(stats: EnsembleStats, period: float = TWO_PI) -> float:
    """Largest |e_q| within the first period."""
    keep = stats.times <= stats.times[0] + period * (1.0 + 1e-12)
    return float(np.max(np.abs(stats.e_q[keep])))


@dataclass(frozen=True)
class MemoryWindowReport:
    """Ratios of the accumulated diffusion of <q>, <phi> and mu over a memory
    time to min(q_typical^2, 4 pi^2); each is satisfied when at most `limit`."""

    back_action_q: float
    back_action_phi: float
    measurement: float
    scale: float
    limit: float

    @property
    def ratios(self) -> Tuple[float, float, float]:
        return (self.back_action_q, self.back_action_phi, self.measurement)

    @property
    def satisfied(self) -> Tuple[bool, bool, bool]:
        return tuple(r <= self.limit for r in self.ratios)  # type: ignore[return-value]

    @property
    def all_satisfied(self) -> bool:
        return all(self.satisfied)

    def to_dict(self) -> dict:
        return {
            "ratios": list(self.ratios),
            "satisfied": list(self.satisfied),
            "scale": self.scale,
            "limit": self.limit,
        }


def memory_window_check(
    params: SimParams,
    q_typical: float,
    t_c: float,
    vq: float,
    cov: float,
    limit: float = MEMORY_RATIO_LIMIT,
) -> MemoryWindowReport:
    """Check that the noise accumulated over the memory time t_c stays small."""
    if not (q_typical > 0 and t_c >= 0 and vq > 0):
        raise ConfigError("memory window check needs q_typical > 0, t_c >= 0 and vq > 0")
    tau = params.tau
    scale = min(q_typical * q_typical, TWO_PI * TWO_PI)
    report = MemoryWindowReport(
        back_action_q=8.0 * tau * vq * t_c / scale,
        back_action_phi=8.0 * tau * abs(cov) * t_c / scale,
        measurement=t_c / (8.0 * tau * scale),
        scale=scale,
        limit=limit,
    )
    if not report.all_satisfied:
        logger.warning(
            "Memory window violated at t_c=%.4g: ratios %.3g, %.3g, %.3g exceed %.3g",
            t_c,
            *report.ratios,
            limit,
        )
    return report


def localization_window(q_typical: float) -> Tuple[float, float]:
    """Range (2 / q_t^2, 4 q_t^2) of tau where the measurement localizes the
    state without drowning the signal."""
    if not q_typical > 0:
        raise ConfigError("q_typical must be positive")
    s = q_typical * q_typical
    return (2.0 / s, 4.0 * s)


def squeezing_crossings(record: TrajectoryRecord) -> List[float]:
    """Times where the squeezing moves between charge and flux (V_q = V_phi)."""
    return sign_change_times(record.times, record.var_q - record.var_phi)


@dataclass(frozen=True)
class CrossingDeviation:
    time: float
    delta: float
    se: float


def deviation_at_crossings(stats: EnsembleStats) -> List[CrossingDeviation]:
    """Factorization deviation, with its error, where e_q crosses zero.

    Nonzero values there mean the ensemble loop is not pinched at the origin.
    """
    dev = factorization_deviation(stats)
    return [
        CrossingDeviation(
            time=t,
            delta=float(np.interp(t, dev.times, dev.delta)),
            se=float(np.interp(t, dev.times, dev.se)),
        )
        for t in sign_change_times(stats.times, stats.e_q)
    ]
