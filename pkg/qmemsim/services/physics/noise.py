"""Reproducible per-trajectory Gaussian streams.

Each trajectory owns a PCG64 generator seeded from
SeedSequence(master_seed, spawn_key=(trajectory_index,)), so the variates of
trajectory k depend only on (master_seed, k): ensembles are independent of
execution order and of how trajectories are grouped into batches.
"""

import numpy as np


class NoiseStream:
    """Standard normal variates G for one trajectory; dW = G * sqrt(dt)."""

    def __init__(self, master_seed: int, trajectory_index: int):
        self.master_seed = int(master_seed)
        self.trajectory_index = int(trajectory_index)
        self._seed_sequence = np.random.SeedSequence(
            entropy=self.master_seed, spawn_key=(self.trajectory_index,)
        )
        self._generator = np.random.Generator(np.random.PCG64(self._seed_sequence))

    @property
    def derived_seed(self) -> int:
        """64-bit value identifying this stream."""
        return int(self._seed_sequence.generate_state(1, dtype=np.uint64)[0])

    def gaussians(self, n: int, substeps: int = 1) -> np.ndarray:
        """Next n standard normal variates.

        With substeps > 1 each variate is the normalized sum of `substeps`
        consecutive draws, i.e. the increment over one coarse step of the same
        Brownian path sampled at a step `substeps` times finer.
        """
        if substeps == 1:
            return self._generator.standard_normal(n)
        fine = self._generator.standard_normal(n * substeps).reshape(n, substeps)
        return fine.sum(axis=1) / np.sqrt(substeps)
