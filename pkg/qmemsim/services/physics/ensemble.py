"""Monte Carlo ensembles of conditioned trajectories and their reduction to
unconditioned averages.

Trajectories are grouped into fixed batches by index; each batch is integrated
and reduced to per-time moments where it runs, and batch moments are merged
pairwise in batch-index order. Neither the worker count nor the completion
order of batches can change a single bit of the result.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from tqdm import tqdm

from qmemsim.config import BATCH_SIZE, WORKERS, logger
from qmemsim.models.errors import ConfigError, EnsembleError, SimulationError
from qmemsim.models.params import SimParams, validate
from qmemsim.models.records import EnsembleStats, TrajectoryRecord
from qmemsim.models.states import GaussianState
from qmemsim.services.physics.dynamics import RateLaw
from qmemsim.services.physics.noise import NoiseStream
from qmemsim.services.physics.sde_engine import BatchSamples, integrate_batch

# Reduced quantities, each an array over record times.
_QUANTITIES = ("q", "phi", "gamma", "gamma_q", "gamma_q2", "mu")


@dataclass
class BatchMoments:
    """Count, means, centred second moments and the gamma-q co-moment of a batch."""

    n: int
    mean: Dict[str, np.ndarray]
    m2: Dict[str, np.ndarray]
    c_gamma_q: np.ndarray

    @classmethod
    def from_samples(cls, samples: BatchSamples) -> "BatchMoments":
        values = {
            "q": samples.mean_q,
            "phi": samples.mean_phi,
            "gamma": samples.gammas,
            "gamma_q": samples.gammas * samples.mean_q,
            "gamma_q2": samples.gammas * (samples.mean_q**2 + samples.var_q),
            "mu": samples.mu,
        }
        n = samples.mean_q.shape[1]
        mean: Dict[str, np.ndarray] = {}
        centred: Dict[str, np.ndarray] = {}
        for name, x in values.items():
            # Shifting by the first trajectory keeps a constant column exact.
            shift = x[:, :1]
            offset = np.ascontiguousarray(x - shift)
            mean[name] = shift[:, 0] + offset.sum(axis=1) / n
            centred[name] = x - mean[name][:, None]
        m2 = {name: np.ascontiguousarray(c * c).sum(axis=1) for name, c in centred.items()}
        c_gamma_q = np.ascontiguousarray(centred["gamma"] * centred["q"]).sum(axis=1)
        return cls(n=n, mean=mean, m2=m2, c_gamma_q=c_gamma_q)

    def merge(self, other: "BatchMoments") -> "BatchMoments":
        """Chan et al. parallel combination of two disjoint batches."""
        n = self.n + other.n
        w = other.n / n
        cross = self.n * other.n / n
        delta = {k: other.mean[k] - self.mean[k] for k in _QUANTITIES}
        mean = {k: self.mean[k] + delta[k] * w for k in _QUANTITIES}
        m2 = {k: self.m2[k] + other.m2[k] + delta[k] * delta[k] * cross for k in _QUANTITIES}
        c_gamma_q = self.c_gamma_q + other.c_gamma_q + delta["gamma"] * delta["q"] * cross
        return BatchMoments(n=n, mean=mean, m2=m2, c_gamma_q=c_gamma_q)


def merge_tree(parts: Sequence[BatchMoments]) -> BatchMoments:
    """Pairwise merge in index order."""
    if len(parts) == 1:
        return parts[0]
    half = len(parts) // 2
    return merge_tree(parts[:half]).merge(merge_tree(parts[half:]))


@dataclass
class _BatchTask:
    params: SimParams
    init: GaussianState
    start: int
    stop: int
    substeps: int
    keep: Tuple[int, ...]
    rate_law: Optional[RateLaw]


@dataclass
class _BatchOutcome:
    start: int
    moments: Optional[BatchMoments] = None
    records: List[TrajectoryRecord] = field(default_factory=list)
    failure: Optional[SimulationError] = None


def _run_batch(task: _BatchTask) -> _BatchOutcome:
    streams = [NoiseStream(task.params.master_seed, k) for k in range(task.start, task.stop)]
    try:
        samples = integrate_batch(
            task.params,
            task.init,
            streams,
            substeps=task.substeps,
            rate_law=task.rate_law,
            keep_measurement=bool(task.keep),
        )
    except SimulationError as e:
        return _BatchOutcome(start=task.start, failure=e)
    records = [samples.record(k - task.start) for k in task.keep]
    return _BatchOutcome(start=task.start, moments=BatchMoments.from_samples(samples), records=records)


@dataclass
class EnsembleResult:
    stats: EnsembleStats
    trajectories: Dict[int, TrajectoryRecord]


class EnsembleRunner:
    """Runs n_traj conditioned trajectories and reduces them to EnsembleStats."""

    def __init__(
        self,
        params: SimParams,
        init: GaussianState,
        workers: int = WORKERS,
        batch_size: int = BATCH_SIZE,
        substeps: int = 1,
        keep: Iterable[int] = (),
        rate_law: Optional[RateLaw] = None,
        show_progress: bool = True,
    ):
        """Initialize with validated parameters, initial state and execution options.

        keep lists trajectory indices whose full records are returned. A custom
        rate_law must be picklable (a module-level function) when workers > 1.
        """
        self.params = validate(params)
        if params.n_traj < 2:
            raise ConfigError("ensemble requires ≥ 2 trajectories")
        if batch_size < 1 or workers < 1 or substeps < 1:
            raise ConfigError("batch_size, workers and substeps must be positive")
        self.init = init
        self.workers = workers
        self.batch_size = batch_size
        self.substeps = substeps
        self.keep = sorted({int(k) for k in keep})
        bad = [k for k in self.keep if not 0 <= k < params.n_traj]
        if bad:
            raise ConfigError(f"requested trajectories {bad} outside [0, {params.n_traj})")
        self.rate_law = rate_law
        self.show_progress = show_progress

    def _tasks(self) -> List[_BatchTask]:
        tasks = []
        for start in range(0, self.params.n_traj, self.batch_size):
            stop = min(start + self.batch_size, self.params.n_traj)
            keep = tuple(k for k in self.keep if start <= k < stop)
            tasks.append(
                _BatchTask(self.params, self.init, start, stop, self.substeps, keep, self.rate_law)
            )
        return tasks

    def _outcomes(self, tasks: List[_BatchTask]) -> Iterable[_BatchOutcome]:
        progress = dict(total=len(tasks), desc="Trajectory batches", disable=not self.show_progress)
        if self.workers == 1 or len(tasks) == 1:
            yield from tqdm(map(_run_batch, tasks), **progress)
            return
        with ProcessPoolExecutor(max_workers=min(self.workers, len(tasks))) as pool:
            yield from tqdm(pool.map(_run_batch, tasks), **progress)

    def run(self) -> EnsembleResult:
        """Integrate every batch and reduce; fails if any trajectory aborts."""
        tasks = self._tasks()
        logger.info(
            "Running %d trajectories in %d batches on %d worker(s) (tau=%g, dt=%g, t_final=%g)",
            self.params.n_traj,
            len(tasks),
            self.workers,
            self.params.tau,
            self.params.dt,
            self.params.t_final,
        )
        parts: List[BatchMoments] = []
        failures: List[SimulationError] = []
        trajectories: Dict[int, TrajectoryRecord] = {}
        for outcome in self._outcomes(tasks):
            if outcome.failure is not None:
                logger.error("Batch starting at trajectory %d failed: %s", outcome.start, outcome.failure)
                failures.append(outcome.failure)
                continue
            assert outcome.moments is not None
            parts.append(outcome.moments)
            for record in outcome.records:
                trajectories[record.trajectory_index] = record
        if failures:
            raise EnsembleError(failures)
        stats = _finalize(merge_tree(parts), self.params)
        return EnsembleResult(stats=stats, trajectories=trajectories)


def _finalize(moments: BatchMoments, params: SimParams) -> EnsembleStats:
    n = moments.n
    times = np.arange(params.n_records) * params.record_interval

    def sample_var(name: str) -> np.ndarray:
        return moments.m2[name] / (n - 1)

    return EnsembleStats(
        times=times,
        e_q=moments.mean["q"],
        e_phi=moments.mean["phi"],
        e_gamma=moments.mean["gamma"],
        e_gamma_q=moments.mean["gamma_q"],
        e_gamma_q2=moments.mean["gamma_q2"],
        var_mu=sample_var("mu"),
        se_q=np.sqrt(sample_var("q") / n),
        se_gamma_q=np.sqrt(sample_var("gamma_q") / n),
        n_traj=n,
        se_gamma=np.sqrt(sample_var("gamma") / n),
        cov_gamma_q=moments.c_gamma_q / (n - 1),
    )


def run_ensemble(
    params: SimParams,
    init: GaussianState,
    workers: int = WORKERS,
    batch_size: int = BATCH_SIZE,
    substeps: int = 1,
    rate_law: Optional[RateLaw] = None,
    show_progress: bool = True,
) -> EnsembleStats:
    """Unconditioned averages of params.n_traj conditioned trajectories."""
    runner = EnsembleRunner(
        params,
        init,
        workers=workers,
        batch_size=batch_size,
        substeps=substeps,
        rate_law=rate_law,
        show_progress=show_progress,
    )
    return runner.run().stats


@dataclass(frozen=True, eq=False)
class FactorizationDeviation:
    """delta_q(t) = E[gamma <q>] - E[gamma] E[<q>] with its standard error."""

    times: np.ndarray
    delta: np.ndarray
    se: np.ndarray


def factorization_deviation(stats: EnsembleStats) -> FactorizationDeviation:
    """Deviation of E[gamma q] from the product of the separate averages.

    Computed from the gamma-q co-moment when available, so a constant gamma
    gives exactly zero. The error uses the Gaussian fourth-moment formula
    Var[(g - Eg)(q - Eq)] = Var g Var q + Cov(g, q)^2.
    """
    n = stats.n_traj
    if stats.cov_gamma_q is not None and stats.se_gamma is not None:
        cov = stats.cov_gamma_q
        delta = cov * ((n - 1) / n)
        var_gamma = stats.se_gamma**2 * n
        var_q = stats.se_q**2 * n
        se = np.sqrt((var_gamma * var_q + cov**2) / n)
    else:
        delta = stats.e_gamma_q - stats.e_gamma * stats.e_q
        # Without the co-moment only the current error is available.
        se = stats.se_gamma_q.copy()
    return FactorizationDeviation(times=stats.times, delta=delta, se=se)


def non_markovianity_witness(stats: EnsembleStats, n_se: float = 3.0) -> bool:
    """True if delta_q exceeds n_se standard errors at some recorded time."""
    dev = factorization_deviation(stats)
    return bool(np.any(np.abs(dev.delta) > n_se * dev.se))

