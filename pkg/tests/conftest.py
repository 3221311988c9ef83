"""Pytest configuration and shared fixtures for qmemsim tests."""

import math
import os
import tempfile
import shutil
from dataclasses import replace
from typing import Generator
import pytest

from qmemsim.models import GaussianState, SimParams
from qmemsim.presets import FIG3_INITIAL, PRESETS


@pytest.fixture
def temp_dir() -> Generator[str, None, None]:
    """Create a temporary directory for test files."""
    temp_directory = tempfile.mkdtemp()
    yield temp_directory
    if os.path.exists(temp_directory):
        shutil.rmtree(temp_directory)


@pytest.fixture
def fig3_initial() -> GaussianState:
    """Initial state of the hysteresis presets."""
    return FIG3_INITIAL


@pytest.fixture
def optimal_params() -> SimParams:
    """Optimal-measurement preset parameters."""
    return PRESETS["fig3b"].params


@pytest.fixture
def small_params(optimal_params: SimParams) -> SimParams:
    """A cheap run: one period, 40 trajectories, coarse record grid."""
    return replace(
        optimal_params,
        dt=2e-3,
        t_final=2.0 * math.pi,
        n_traj=40,
        record_stride=10,
        master_seed=7,
    )


@pytest.fixture
def memoryless_params(small_params: SimParams) -> SimParams:
    """Constant damping rate: epsilon = 0."""
    return replace(small_params, epsilon=0.0)


@pytest.fixture
def params_json() -> str:
    """A parameter file overriding the trajectory count of a preset."""
    return '{"preset": "fig3b", "n_traj": 20, "t_final": 6.4, "dt": 0.002}\n'
