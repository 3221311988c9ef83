"""Fixed-step integrators: Euler-Maruyama for conditioned trajectories, RK4 for
the classical circuit.

The stochastic scheme follows the Ito convention: drift, diffusion and
gamma(mu) are evaluated at the start of each step, and one scalar increment
dW = G * sqrt(dt) drives <phi>, <q> and mu alike, because a single measurement
record both updates the state and feeds the memristor.
"""

from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from qmemsim.config import logger
from qmemsim.models.errors import NonPositiveVariance
from qmemsim.models.params import SimParams
from qmemsim.models.records import ClassicalTrajectory, TrajectoryRecord
from qmemsim.models.states import UNCERTAINTY_BOUND, ClassicalState, GaussianState
from qmemsim.services.physics.dynamics import (
    RateLaw,
    Scalar,
    classical_rhs,
    damping_rate,
    diffusion,
    drift,
)
from qmemsim.services.physics.noise import NoiseStream

# Steps drawn from each noise stream at once (rounded to whole record intervals).
NOISE_CHUNK_STEPS = 1024

_SAMPLED_FIELDS = ("mean_phi", "mean_q", "var_phi", "var_q", "cov", "mu")


def measurement_record(state_before: GaussianState, dW: Scalar, params: SimParams) -> Scalar:
    """Voltage record M = <q> + dW / (sqrt(8 tau) dt) emitted over one step.

    nu * M * dt reproduces the state-variable increment of the same step.
    """
    return state_before.mean_q + dW / (np.sqrt(8.0 * params.tau) * params.dt)


def euler_step(
    state: GaussianState,
    params: SimParams,
    gauss: float,
    rate_law: Optional[RateLaw] = None,
    time: float = 0.0,
) -> GaussianState:
    """Advance one conditioned state by dt with the standard normal variate `gauss`.

    Raises NonPositiveVariance (stamped with the post-step time) if either
    variance leaves the positive half-line.
    """
    dt = params.dt
    dW = gauss * np.sqrt(dt)
    d = drift(state, params, rate_law)
    g = diffusion(state, params)
    nxt = GaussianState(
        mean_phi=float(state.mean_phi + d.d_mean_phi * dt + g.g_mean_phi * dW),
        mean_q=float(state.mean_q + d.d_mean_q * dt + g.g_mean_q * dW),
        var_phi=float(state.var_phi + d.d_var_phi * dt),
        var_q=float(state.var_q + d.d_var_q * dt),
        cov=float(state.cov + d.d_cov * dt),
        mu=float(state.mu + d.d_mu * dt + g.g_mu * dW),
    )
    return nxt.check(time + dt)


@dataclass
class _MomentBatch:
    """Mutable working state of a group of trajectories (one array entry each)."""

    mean_phi: np.ndarray
    mean_q: np.ndarray
    var_phi: np.ndarray
    var_q: np.ndarray
    cov: np.ndarray
    mu: np.ndarray

    @classmethod
    def filled(cls, init: GaussianState, size: int) -> "_MomentBatch":
        return cls(
            mean_phi=np.full(size, init.mean_phi),
            mean_q=np.full(size, init.mean_q),
            var_phi=np.full(size, init.var_phi),
            var_q=np.full(size, init.var_q),
            cov=np.full(size, init.cov),
            mu=np.full(size, init.mu),
        )


@dataclass
class BatchSamples:
    """Recorded samples of a group of trajectories, arrays shaped (n_records, size)."""

    times: np.ndarray
    mean_phi: np.ndarray
    mean_q: np.ndarray
    var_phi: np.ndarray
    var_q: np.ndarray
    cov: np.ndarray
    mu: np.ndarray
    gammas: np.ndarray
    measurement: Optional[np.ndarray]
    indices: List[int]

    def record(self, column: int) -> TrajectoryRecord:
        """TrajectoryRecord of the trajectory stored in `column`."""
        return TrajectoryRecord(
            times=self.times.copy(),
            mean_phi=self.mean_phi[:, column].copy(),
            mean_q=self.mean_q[:, column].copy(),
            var_phi=self.var_phi[:, column].copy(),
            var_q=self.var_q[:, column].copy(),
            cov=self.cov[:, column].copy(),
            mu=self.mu[:, column].copy(),
            gammas=self.gammas[:, column].copy(),
            measurement_record=(
                None if self.measurement is None else self.measurement[:, column].copy()
            ),
            trajectory_index=self.indices[column],
        )


def integrate_batch(
    params: SimParams,
    init: GaussianState,
    streams: Sequence[NoiseStream],
    substeps: int = 1,
    rate_law: Optional[RateLaw] = None,
    keep_measurement: bool = False,
) -> BatchSamples:
    """Integrate one trajectory per stream in lock-step, vectorized over trajectories.

    Element-wise arithmetic keeps every trajectory independent of the others
    in the group. Only whole record intervals are integrated.
    """
    init.check()
    size = len(streams)
    indices = [s.trajectory_index for s in streams]
    stride = params.record_stride
    n_records = params.n_records
    n_steps = (n_records - 1) * stride
    dt = params.dt
    sqrt_dt = np.sqrt(dt)
    record_scale = 1.0 / (np.sqrt(8.0 * params.tau) * dt)

    x = _MomentBatch.filled(init, size)
    out = {name: np.empty((n_records, size)) for name in _SAMPLED_FIELDS + ("gammas",)}
    measurement = np.empty((n_records - 1, size)) if keep_measurement else None
    m_acc = np.zeros(size)
    warned = False

    def store(k: int) -> None:
        for name in _SAMPLED_FIELDS:
            out[name][k] = getattr(x, name)
        out["gammas"][k] = (
            damping_rate(x.mu, params.gamma0, params.epsilon) if rate_law is None else rate_law(x.mu)
        )

    store(0)
    chunk_steps = stride * max(1, NOISE_CHUNK_STEPS // stride)
    step = 0
    while step < n_steps:
        chunk = min(chunk_steps, n_steps - step)
        noise = np.stack([s.gaussians(chunk, substeps) for s in streams])
        for j in range(chunk):
            dW = noise[:, j] * sqrt_dt
            if keep_measurement:
                m_acc += x.mean_q + dW * record_scale
            d = drift(x, params, rate_law)
            g = diffusion(x, params)
            x = _MomentBatch(
                mean_phi=x.mean_phi + d.d_mean_phi * dt + g.g_mean_phi * dW,
                mean_q=x.mean_q + d.d_mean_q * dt + g.g_mean_q * dW,
                var_phi=x.var_phi + d.d_var_phi * dt,
                var_q=x.var_q + d.d_var_q * dt,
                cov=x.cov + d.d_cov * dt,
                mu=x.mu + d.d_mu * dt + g.g_mu * dW,
            )
            step += 1
            if not (np.min(x.var_phi) > 0 and np.min(x.var_q) > 0):
                raise _variance_failure(x, step * dt, indices)
            if step % stride == 0:
                k = step // stride
                store(k)
                if measurement is not None:
                    measurement[k - 1] = m_acc / stride
                    m_acc[:] = 0.0
                if not warned:
                    warned = _warn_uncertainty(x, step * dt, indices)

    return BatchSamples(
        times=np.arange(n_records) * params.record_interval,
        measurement=measurement,
        indices=indices,
        **out,
    )


def _variance_failure(x: _MomentBatch, time: float, indices: List[int]) -> NonPositiveVariance:
    for name in ("var_phi", "var_q"):
        values = getattr(x, name)
        bad = np.flatnonzero(~(values > 0))
        if bad.size:
            column = int(bad[0])
            return NonPositiveVariance(name, time, float(values[column]), indices[column])
    return NonPositiveVariance("var_q", time, float("nan"))


def _warn_uncertainty(x: _MomentBatch, time: float, indices: List[int]) -> bool:
    product = x.var_phi * x.var_q - x.cov**2
    bad = np.flatnonzero(product < UNCERTAINTY_BOUND)
    if bad.size:
        column = int(bad[0])
        logger.warning(
            "Uncertainty product %.6g below 1/4 at t=%.4g in trajectory %d "
            "(further violations in this batch are not reported)",
            float(product[column]),
            time,
            indices[column],
        )
        return True
    return False


def integrate_trajectory(
    params: SimParams,
    init: GaussianState,
    stream: NoiseStream,
    substeps: int = 1,
    rate_law: Optional[RateLaw] = None,
) -> TrajectoryRecord:
    """Integrate a single conditioned trajectory, keeping its measurement record."""
    samples = integrate_batch(
        params, init, [stream], substeps=substeps, rate_law=rate_law, keep_measurement=True
    )
    return samples.record(0)


def rk4_step_classical(
    state: ClassicalState, params: SimParams, rate_law: Optional[RateLaw] = None
) -> ClassicalState:
    """Classical fourth-order Runge-Kutta step of (phi, q, mu)."""
    h = params.dt

    def rhs(phi: float, q: float, mu: float) -> np.ndarray:
        return np.asarray(classical_rhs(ClassicalState(phi, q, mu), params, rate_law), dtype=float)

    y = np.array([state.phi, state.q, state.mu])
    k1 = rhs(*y)
    k2 = rhs(*(y + 0.5 * h * k1))
    k3 = rhs(*(y + 0.5 * h * k2))
    k4 = rhs(*(y + h * k3))
    y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return ClassicalState(phi=float(y[0]), q=float(y[1]), mu=float(y[2]))


def classical_from_gaussian(state: GaussianState) -> ClassicalState:
    """Classical initial condition taken from the quantum means."""
    return ClassicalState(phi=state.mean_phi, q=state.mean_q, mu=state.mu)


def integrate_classical(
    params: SimParams, init: ClassicalState, rate_law: Optional[RateLaw] = None
) -> ClassicalTrajectory:
    """Deterministic classical trajectory on the same record grid as the quantum runs."""
    stride = params.record_stride
    n_records = params.n_records
    phi = np.empty(n_records)
    q = np.empty(n_records)
    mu = np.empty(n_records)
    state = init
    phi[0], q[0], mu[0] = state.phi, state.q, state.mu
    for k in range(1, n_records):
        for _ in range(stride):
            state = rk4_step_classical(state, params, rate_law)
        phi[k], q[k], mu[k] = state.phi, state.q, state.mu
    gammas = damping_rate(mu, params.gamma0, params.epsilon) if rate_law is None else rate_law(mu)
    return ClassicalTrajectory(
        times=np.arange(n_records) * params.record_interval,
        phi=phi,
        q=q,
        mu=mu,
        gammas=np.asarray(gammas, dtype=float),
    )
