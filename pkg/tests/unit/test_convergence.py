"""Unit tests for the step-size convergence study."""

from dataclasses import replace

import pytest

from qmemsim.models import ConfigError, GaussianState, SimParams
from qmemsim.services.analysis.convergence import convergence_study


@pytest.fixture
def short_params(small_params: SimParams) -> SimParams:
    """Short, small ensemble for convergence runs."""
    return replace(small_params, t_final=1.0, n_traj=16, record_stride=5)


def test_single_step_size_rejected(short_params: SimParams, fig3_initial: GaussianState):
    """Test that a comparison needs at least two step sizes."""
    with pytest.raises(ConfigError, match="need ≥ 2 step sizes"):
        convergence_study(short_params, [1e-3], fig3_initial)


def test_ascending_step_sizes_rejected(short_params: SimParams, fig3_initial: GaussianState):
    """Test that step sizes must be descending."""
    with pytest.raises(ConfigError, match="descending"):
        convergence_study(short_params, [1e-3, 2e-3], fig3_initial)


def test_non_nested_step_sizes_rejected(short_params: SimParams, fig3_initial: GaussianState):
    """Test that coarse steps must be whole multiples of the finest."""
    with pytest.raises(ConfigError, match="nested"):
        convergence_study(short_params, [3e-3, 2e-3], fig3_initial)


def test_memoryless_gaps_are_zero(short_params: SimParams, fig3_initial: GaussianState):
    """Test that a constant damping rate gives identical e_gamma for every dt."""
    report = convergence_study(replace(short_params, epsilon=0.0), [4e-3, 2e-3, 1e-3], fig3_initial)
    assert report.max_gamma_gaps == [0.0, 0.0, 0.0]
    assert report.monotone


def test_report_layout(short_params: SimParams, fig3_initial: GaussianState):
    """Test the report columns and the common record interval."""
    report = convergence_study(short_params, [4e-3, 2e-3, 1e-3], fig3_initial)
    df = report.to_frame()
    assert list(df.columns) == ["dt", "max_gamma_gap"]
    assert list(df["dt"]) == [4e-3, 2e-3, 1e-3]
    assert report.max_gamma_gaps[-1] == 0.0
    assert report.record_interval == pytest.approx(4e-3 * 2)
    assert all(gap >= 0 for gap in report.max_gamma_gaps)
