"""Unit tests for ensemble runs and their reduction."""

from dataclasses import replace

import numpy as np
import pytest

from qmemsim.models import ConfigError, EnsembleError, GaussianState, SimParams
from qmemsim.services.physics.ensemble import (
    BatchMoments,
    EnsembleRunner,
    factorization_deviation,
    merge_tree,
    non_markovianity_witness,
    run_ensemble,
)
from qmemsim.services.physics.noise import NoiseStream
from qmemsim.services.physics.sde_engine import integrate_batch


def test_single_trajectory_rejected(small_params: SimParams, fig3_initial: GaussianState):
    """Test that an ensemble needs at least two trajectories."""
    with pytest.raises(ConfigError, match="≥ 2 trajectories"):
        run_ensemble(replace(small_params, n_traj=1), fig3_initial, show_progress=False)


def test_worker_count_does_not_change_result(small_params: SimParams, fig3_initial: GaussianState):
    """Test bit-identical averages for one and several workers."""
    serial = run_ensemble(small_params, fig3_initial, workers=1, batch_size=8, show_progress=False)
    parallel = run_ensemble(small_params, fig3_initial, workers=3, batch_size=8, show_progress=False)
    assert np.array_equal(serial.e_gamma_q, parallel.e_gamma_q)
    assert np.array_equal(serial.var_mu, parallel.var_mu)
    assert np.array_equal(serial.se_q, parallel.se_q)


@pytest.mark.parametrize("workers", [4, 16])
def test_sixteen_batches_identical_for_any_pool(
    small_params: SimParams, fig3_initial: GaussianState, workers: int
):
    """Test that 16 batches give the serial result whether 4 or 16 processes run them."""
    params = replace(small_params, n_traj=128, t_final=3.2)
    serial = run_ensemble(params, fig3_initial, workers=1, batch_size=8, show_progress=False)
    pooled = run_ensemble(params, fig3_initial, workers=workers, batch_size=8, show_progress=False)
    for name in ("e_q", "e_phi", "e_gamma", "e_gamma_q", "e_gamma_q2", "var_mu", "se_q", "se_gamma_q"):
        assert np.array_equal(getattr(serial, name), getattr(pooled, name)), name


def test_averages_match_direct_means(small_params: SimParams, fig3_initial: GaussianState):
    """Test the merged batch moments against plain numpy statistics."""
    params = replace(small_params, n_traj=20)
    stats = run_ensemble(params, fig3_initial, batch_size=6, show_progress=False)
    samples = integrate_batch(params, fig3_initial, [NoiseStream(params.master_seed, k) for k in range(20)])
    assert np.allclose(stats.e_q, samples.mean_q.mean(axis=1), rtol=1e-12, atol=1e-12)
    assert np.allclose(stats.e_gamma, samples.gammas.mean(axis=1), rtol=1e-12, atol=1e-14)
    assert np.allclose(stats.var_mu, samples.mu.var(axis=1, ddof=1), rtol=1e-9, atol=1e-14)
    assert np.allclose(
        stats.se_q, samples.mean_q.std(axis=1, ddof=1) / np.sqrt(20), rtol=1e-9, atol=1e-14
    )


def test_memoryless_ensemble_is_exact(memoryless_params: SimParams, fig3_initial: GaussianState):
    """Test e_gamma = gamma0 and delta_q = 0 exactly when epsilon = 0."""
    stats = run_ensemble(memoryless_params, fig3_initial, batch_size=16, show_progress=False)
    assert np.all(stats.e_gamma == memoryless_params.gamma0)
    dev = factorization_deviation(stats)
    assert np.all(dev.delta == 0.0)
    assert not non_markovianity_witness(stats)


def test_passivity(small_params: SimParams, fig3_initial: GaussianState):
    """Test that the emitted-power proxy is never negative."""
    stats = run_ensemble(small_params, fig3_initial, show_progress=False)
    assert np.min(stats.e_gamma_q2) >= 0


def test_initial_record_is_the_initial_state(small_params: SimParams, fig3_initial: GaussianState):
    """Test that time zero carries the deterministic initial values."""
    stats = run_ensemble(small_params, fig3_initial, show_progress=False)
    assert stats.times[0] == 0.0
    assert stats.e_q[0] == 0.0
    assert stats.var_mu[0] == 0.0
    assert stats.e_gamma[0] == pytest.approx(0.15)


def test_kept_trajectories_returned(small_params: SimParams, fig3_initial: GaussianState):
    """Test that requested trajectories come back with their records."""
    runner = EnsembleRunner(small_params, fig3_initial, batch_size=16, keep=[0, 17], show_progress=False)
    result = runner.run()
    assert sorted(result.trajectories) == [0, 17]
    assert result.trajectories[17].trajectory_index == 17
    assert result.trajectories[0].measurement_record is not None


def test_keep_out_of_range(small_params: SimParams, fig3_initial: GaussianState):
    """Test that unknown trajectory indices are a ConfigError."""
    with pytest.raises(ConfigError):
        EnsembleRunner(small_params, fig3_initial, keep=[small_params.n_traj])


def test_failing_batch_raises_ensemble_error(fig3_initial: GaussianState):
    """Test that an aborted trajectory fails the whole ensemble."""
    params = SimParams(gamma0=0.1, epsilon=0.5, lambda_=10, nu=0.1, tau=50.0, dt=0.5,
                       t_final=5.0, n_traj=4, record_stride=1)
    with pytest.raises(EnsembleError) as excinfo:
        run_ensemble(params, fig3_initial, batch_size=2, show_progress=False)
    assert len(excinfo.value.failures) == 2


def test_merge_is_associative_up_to_rounding():
    """Test that merging batches equals the moments of their union."""
    rng = np.random.default_rng(0)

    class Samples:
        def __init__(self, n):
            self.mean_q = rng.normal(size=(3, n))
            self.mean_phi = rng.normal(size=(3, n))
            self.gammas = rng.uniform(0.05, 0.15, size=(3, n))
            self.var_q = np.full((3, n), 0.5)
            self.mu = rng.normal(size=(3, n))

    a, b, c = Samples(5), Samples(7), Samples(4)
    merged = merge_tree([BatchMoments.from_samples(s) for s in (a, b, c)])
    q = np.concatenate([a.mean_q, b.mean_q, c.mean_q], axis=1)
    g = np.concatenate([a.gammas, b.gammas, c.gammas], axis=1)
    assert merged.n == 16
    assert np.allclose(merged.mean["q"], q.mean(axis=1))
    assert np.allclose(merged.m2["q"], ((q - q.mean(axis=1, keepdims=True)) ** 2).sum(axis=1))
    expected_c = ((g - g.mean(axis=1, keepdims=True)) * (q - q.mean(axis=1, keepdims=True))).sum(axis=1)
    assert np.allclose(merged.c_gamma_q, expected_c)
