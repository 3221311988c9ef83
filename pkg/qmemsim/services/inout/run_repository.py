"""Repository pattern for the files of one run directory."""

import json
import math
import os
from typing import Any, Dict, List, Optional

import numpy as np
import pandas as pd

from qmemsim.config import DATA_DIR, logger
from qmemsim.models.records import (
    ClassicalTrajectory,
    EnsembleStats,
    TrajectoryRecord,
)

ENSEMBLE_FILE = "ensemble.csv"
CLASSICAL_FILE = "classical.csv"
TAU_SCAN_FILE = "tau_scan.csv"
CONVERGENCE_FILE = "convergence.csv"
SUMMARY_FILE = "summary.json"


def trajectory_file(index: int) -> str:
    return f"trajectory_{index}.csv"


def _jsonable(value: Any) -> Any:
    """Plain-Python copy of value; non-finite floats become null."""
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        f = float(value)
        return f if math.isfinite(f) else None
    return value


class RunRepository:
    """Handles all file I/O of a run's output directory."""

    def __init__(self, out_dir: Optional[str] = None):
        self.out_dir = out_dir or os.path.join(DATA_DIR, "runs", "latest")
        os.makedirs(self.out_dir, exist_ok=True)

    def path(self, name: str) -> str:
        return os.path.join(self.out_dir, name)

    def exists(self, name: str) -> bool:
        return os.path.exists(self.path(name))

    def _write_frame(self, df: pd.DataFrame, name: str) -> str:
        path = self.path(name)
        # Default float formatting is the shortest repr that round-trips.
        df.to_csv(path, index=False, lineterminator="\n")
        logger.info("Wrote %d rows to %s", len(df), path)
        return path

    def _read_frame(self, name: str) -> pd.DataFrame:
        path = self.path(name)
        if not os.path.exists(path):
            logger.warning("No %s found in %s.", name, self.out_dir)
            return pd.DataFrame()
        return pd.read_csv(path, float_precision="round_trip")

    def write_ensemble(self, stats: EnsembleStats) -> str:
        return self._write_frame(stats.to_frame(), ENSEMBLE_FILE)

    def read_ensemble(self, n_traj: int) -> EnsembleStats:
        return EnsembleStats.from_frame(self._read_frame(ENSEMBLE_FILE), n_traj)

    def write_trajectory(self, record: TrajectoryRecord) -> str:
        return self._write_frame(record.to_frame(), trajectory_file(record.trajectory_index))

    def read_trajectory(self, index: int) -> TrajectoryRecord:
        return TrajectoryRecord.from_frame(self._read_frame(trajectory_file(index)), index)

    def write_classical(self, trajectory: ClassicalTrajectory) -> str:
        return self._write_frame(trajectory.to_frame(), CLASSICAL_FILE)

    def read_classical(self) -> ClassicalTrajectory:
        return ClassicalTrajectory.from_frame(self._read_frame(CLASSICAL_FILE))

    def write_tau_scan(self, df: pd.DataFrame) -> str:
        return self._write_frame(df, TAU_SCAN_FILE)

    def write_convergence(self, df: pd.DataFrame) -> str:
        return self._write_frame(df, CONVERGENCE_FILE)

    def read_table(self, name: str) -> pd.DataFrame:
        return self._read_frame(name)

    def read_summary(self) -> Dict[str, Any]:
        """Summary mapping, empty if the run has none yet."""
        if not self.exists(SUMMARY_FILE):
            return {}
        with open(self.path(SUMMARY_FILE), "r", encoding="utf-8") as f:
            return json.load(f)

    def write_summary(self, summary: Dict[str, Any], merge: bool = True) -> str:
        """Write summary.json with sorted keys, merged into any existing summary."""
        data = self.read_summary() if merge else {}
        data.update(_jsonable(summary))
        path = self.path(SUMMARY_FILE)
        with open(path, "w", encoding="utf-8") as f:
            json.dump(data, f, indent=2, sort_keys=True, allow_nan=False)
            f.write("\n")
        logger.info("Wrote summary to %s", path)
        return path

    def files(self) -> List[str]:
        """Names of the regular files in the run directory, sorted."""
        return sorted(
            name for name in os.listdir(self.out_dir) if os.path.isfile(self.path(name))
        )
