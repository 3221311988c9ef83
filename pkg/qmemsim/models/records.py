"""Time-series records produced by the integrators and the ensemble reducer.

Records hold numpy arrays and are treated as immutable once built; the
`to_frame`/`from_frame` pairs are the CSV schema used by RunRepository.
"""

from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np
import pandas as pd

from qmemsim.models.states import ClassicalState, GaussianState

TRAJECTORY_COLUMNS = ["time", "mean_phi", "mean_q", "var_phi", "var_q", "cov", "mu", "gamma"]
ENSEMBLE_COLUMNS = [
    "time",
    "e_q",
    "e_phi",
    "e_gamma",
    "e_gamma_q",
    "e_gamma_q2",
    "var_mu",
    "se_q",
    "se_gamma_q",
]
CLASSICAL_COLUMNS = ["time", "phi", "q", "mu", "gamma", "i_m", "energy"]

# Optional trailing columns, written only when the record carries them.
MEASUREMENT_COLUMN = "measurement_record"
ENSEMBLE_ERROR_COLUMNS = ["se_gamma", "cov_gamma_q"]


@dataclass(frozen=True, eq=False)
class TrajectoryRecord:
    """Decimated time series of one conditioned trajectory.

    measurement_record[k] is the average of the per-step records M over the
    steps between samples k and k + 1.
    """

    times: np.ndarray
    mean_phi: np.ndarray
    mean_q: np.ndarray
    var_phi: np.ndarray
    var_q: np.ndarray
    cov: np.ndarray
    mu: np.ndarray
    gammas: np.ndarray
    measurement_record: Optional[np.ndarray] = None
    trajectory_index: int = 0

    def __post_init__(self) -> None:
        n = len(self.times)
        for name in ("mean_phi", "mean_q", "var_phi", "var_q", "cov", "mu", "gammas"):
            if len(getattr(self, name)) != n:
                raise ValueError(f"TrajectoryRecord.{name} has inconsistent length")
        if self.measurement_record is not None and len(self.measurement_record) != n - 1:
            raise ValueError("measurement_record must have one entry less than times")

    def __len__(self) -> int:
        return len(self.times)

    def state(self, k: int) -> GaussianState:
        return GaussianState(
            mean_phi=float(self.mean_phi[k]),
            mean_q=float(self.mean_q[k]),
            var_phi=float(self.var_phi[k]),
            var_q=float(self.var_q[k]),
            cov=float(self.cov[k]),
            mu=float(self.mu[k]),
        )

    @property
    def states(self) -> List[GaussianState]:
        return [self.state(k) for k in range(len(self))]

    def to_frame(self) -> pd.DataFrame:
        """Trajectory columns, then the measurement record (empty in the last row)."""
        df = pd.DataFrame(
            {
                "time": self.times,
                "mean_phi": self.mean_phi,
                "mean_q": self.mean_q,
                "var_phi": self.var_phi,
                "var_q": self.var_q,
                "cov": self.cov,
                "mu": self.mu,
                "gamma": self.gammas,
            },
            columns=TRAJECTORY_COLUMNS,
        )
        if self.measurement_record is not None:
            df[MEASUREMENT_COLUMN] = np.append(self.measurement_record, np.nan)
        return df

    @classmethod
    def from_frame(cls, df: pd.DataFrame, trajectory_index: int = 0) -> "TrajectoryRecord":
        record = None
        if MEASUREMENT_COLUMN in df.columns:
            record = df[MEASUREMENT_COLUMN].to_numpy()[:-1]
        return cls(
            times=df["time"].to_numpy(),
            mean_phi=df["mean_phi"].to_numpy(),
            mean_q=df["mean_q"].to_numpy(),
            var_phi=df["var_phi"].to_numpy(),
            var_q=df["var_q"].to_numpy(),
            cov=df["cov"].to_numpy(),
            mu=df["mu"].to_numpy(),
            gammas=df["gamma"].to_numpy(),
            measurement_record=record,
            trajectory_index=trajectory_index,
        )


@dataclass(frozen=True, eq=False)
class ClassicalTrajectory:
    """Deterministic trajectory of the classical circuit on the quantum time grid."""

    times: np.ndarray
    phi: np.ndarray
    q: np.ndarray
    mu: np.ndarray
    gammas: np.ndarray

    @property
    def i_m(self) -> np.ndarray:
        """Memristor current proxy gamma(mu) * q."""
        return self.gammas * self.q

    @property
    def energy(self) -> np.ndarray:
        return 0.5 * (self.q**2 + self.phi**2)

    def state(self, k: int) -> ClassicalState:
        return ClassicalState(phi=float(self.phi[k]), q=float(self.q[k]), mu=float(self.mu[k]))

    def rows(self) -> List[Tuple[float, ClassicalState, float, float]]:
        """(time, state, gamma, i_M) tuples in time order."""
        i_m = self.i_m
        return [
            (float(self.times[k]), self.state(k), float(self.gammas[k]), float(i_m[k]))
            for k in range(len(self.times))
        ]

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {
                "time": self.times,
                "phi": self.phi,
                "q": self.q,
                "mu": self.mu,
                "gamma": self.gammas,
                "i_m": self.i_m,
                "energy": self.energy,
            },
            columns=CLASSICAL_COLUMNS,
        )

    @classmethod
    def from_frame(cls, df: pd.DataFrame) -> "ClassicalTrajectory":
        return cls(
            times=df["time"].to_numpy(),
            phi=df["phi"].to_numpy(),
            q=df["q"].to_numpy(),
            mu=df["mu"].to_numpy(),
            gammas=df["gamma"].to_numpy(),
        )


@dataclass(frozen=True, eq=False)
class EnsembleStats:
    """Ensemble averages over conditioned trajectories on a common time grid."""

    times: np.ndarray
    e_q: np.ndarray
    e_phi: np.ndarray
    e_gamma: np.ndarray
    e_gamma_q: np.ndarray
    e_gamma_q2: np.ndarray
    var_mu: np.ndarray
    se_q: np.ndarray
    se_gamma_q: np.ndarray
    n_traj: int
    # Standard error of e_gamma and the sample covariance of gamma with <q>,
    # needed to propagate the error of the factorization deviation.
    se_gamma: Optional[np.ndarray] = None
    cov_gamma_q: Optional[np.ndarray] = None

    def __len__(self) -> int:
        return len(self.times)

    def to_frame(self) -> pd.DataFrame:
        """ensemble.csv columns, followed by the gamma errors when present."""
        data = {"time": self.times}
        data.update({c: getattr(self, c) for c in ENSEMBLE_COLUMNS[1:]})
        columns = list(ENSEMBLE_COLUMNS)
        for name in ENSEMBLE_ERROR_COLUMNS:
            value = getattr(self, name)
            if value is not None:
                data[name] = value
                columns.append(name)
        return pd.DataFrame(data, columns=columns)

    @classmethod
    def from_frame(cls, df: pd.DataFrame, n_traj: int) -> "EnsembleStats":
        values = {c: df[c].to_numpy() for c in ENSEMBLE_COLUMNS[1:]}
        for name in ENSEMBLE_ERROR_COLUMNS:
            if name in df.columns:
                values[name] = df[name].to_numpy()
        return cls(times=df["time"].to_numpy(), n_traj=n_traj, **values)


@dataclass(frozen=True)
class Lobe:
    """Sub-curve between consecutive zero crossings of the voltage proxy.

    start_index and end_index are inclusive sample indices. A lobe that wraps
    around a closed curve has start_index > end_index.
    """

    t_start: float
    t_end: float
    signed_area: float
    start_index: int
    end_index: int


@dataclass(frozen=True, eq=False)
class HysteresisCurve:
    """Ordered (voltage proxy, current proxy) samples with per-lobe areas."""

    times: np.ndarray
    v: np.ndarray
    i: np.ndarray
    lobes: List[Lobe] = field(default_factory=list)
    se_v: Optional[np.ndarray] = None
    se_i: Optional[np.ndarray] = None

    @property
    def samples(self) -> List[Tuple[float, float, float]]:
        """(time, v, i) triples in time order."""
        return list(zip(self.times.tolist(), self.v.tolist(), self.i.tolist()))

    @property
    def total_area(self) -> float:
        return float(sum(abs(lobe.signed_area) for lobe in self.lobes))
