"""Step-size convergence of the ensemble damping rate.

Every step size integrates the same Brownian paths: the finest step draws
the increments and coarser steps sum them, so the gaps between runs measure
discretization error only.
"""

import math
from dataclasses import dataclass, replace
from typing import List, Optional, Sequence

import numpy as np
import pandas as pd

from qmemsim.config import BATCH_SIZE, WORKERS, logger
from qmemsim.models.errors import ConfigError
from qmemsim.models.params import SimParams
from qmemsim.models.records import EnsembleStats
from qmemsim.models.states import GaussianState
from qmemsim.services.physics.dynamics import RateLaw
from qmemsim.services.physics.ensemble import run_ensemble

CONVERGENCE_COLUMNS = ["dt", "max_gamma_gap"]
_NESTING_TOLERANCE = 1e-9


@dataclass(frozen=True, eq=False)
class ConvergenceReport:
    """max_gamma_gaps[k] = max_t |e_gamma at dts[k] - e_gamma at the finest dt|.

    The finest step size is listed last with a gap of 0.
    """

    dts: List[float]
    max_gamma_gaps: List[float]
    monotone: bool
    record_interval: float

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {"dt": self.dts, "max_gamma_gap": self.max_gamma_gaps}, columns=CONVERGENCE_COLUMNS
        )


def _ratio(big: float, small: float, what: str) -> int:
    r = big / small
    n = int(round(r))
    if n < 1 or abs(r - n) > _NESTING_TOLERANCE * r:
        raise ConfigError(f"step sizes must be nested: {what} ({big:g} / {small:g} = {r:.6g})")
    return n


def convergence_study(
    params: SimParams,
    dts: Sequence[float],
    init: GaussianState,
    workers: int = WORKERS,
    batch_size: int = BATCH_SIZE,
    rate_law: Optional[RateLaw] = None,
) -> ConvergenceReport:
    """Run one ensemble per step size and compare their damping rates.

    dts must be strictly descending, and each must be a whole multiple of the
    next smaller one so the coarse increments are sums of the fine ones. All
    runs are sampled on a common grid whose interval is the multiple of the
    coarsest step nearest to params.record_interval.
    """
    dts = [float(dt) for dt in dts]
    if len(dts) < 2:
        raise ConfigError("need ≥ 2 step sizes")
    if any(not dt > 0 for dt in dts) or any(a <= b for a, b in zip(dts, dts[1:])):
        raise ConfigError("step sizes must be positive and strictly descending")
    dt_min = dts[-1]
    substeps = [_ratio(dt, dt_min, "finest step must divide every step") for dt in dts]
    multiples = max(1, int(round(params.record_interval / dts[0])))
    interval = multiples * dts[0]
    strides = [_ratio(interval, dt, "every step must divide the coarsest") for dt in dts]
    n_intervals = int(math.floor(params.t_final / interval + 1e-9))
    if n_intervals < 1:
        raise ConfigError(f"t_final {params.t_final:g} is shorter than the record interval {interval:g}")

    runs: List[EnsembleStats] = []
    for dt, sub, stride in zip(dts, substeps, strides):
        run_params = replace(params, dt=dt, record_stride=stride, t_final=n_intervals * interval)
        logger.info("Convergence run dt=%g (%d substeps, stride %d)", dt, sub, stride)
        runs.append(
            run_ensemble(
                run_params,
                init,
                workers=workers,
                batch_size=batch_size,
                substeps=sub,
                rate_law=rate_law,
                show_progress=False,
            )
        )

    reference = runs[-1].e_gamma
    gaps = []
    for stats in runs:
        n = min(len(stats.e_gamma), len(reference))
        gaps.append(float(np.max(np.abs(stats.e_gamma[:n] - reference[:n]))))
    monotone = all(later <= earlier for earlier, later in zip(gaps[:-1], gaps[1:-1]))
    logger.info("Convergence gaps %s (monotone: %s)", gaps, monotone)
    return ConvergenceReport(dts=dts, max_gamma_gaps=gaps, monotone=monotone, record_interval=interval)
