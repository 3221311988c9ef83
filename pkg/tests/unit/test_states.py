"""Unit tests for Gaussian and classical state records."""

import pytest

from qmemsim.models import ClassicalState, ConfigError, GaussianState, NonPositiveVariance


def test_uncertainty_product_of_vacuum():
    """Test that the vacuum saturates the uncertainty bound."""
    state = GaussianState(mean_phi=0, mean_q=0, var_phi=0.5, var_q=0.5, cov=0, mu=0)
    assert state.uncertainty_product == pytest.approx(0.25)


def test_check_rejects_non_positive_variance():
    """Test that check() names the offending field and time."""
    state = GaussianState(mean_phi=0, mean_q=0, var_phi=0.5, var_q=-1e-3, cov=0, mu=0)
    with pytest.raises(NonPositiveVariance) as excinfo:
        state.check(time=1.5)
    assert excinfo.value.field == "var_q"
    assert excinfo.value.time == 1.5
    assert "var_q" in str(excinfo.value)


def test_gaussian_state_dict_round_trip():
    """Test conversion to and from a mapping."""
    state = GaussianState(mean_phi=20, mean_q=0, var_phi=0.9, var_q=0.3, cov=0.01, mu=0.2)
    assert GaussianState.from_dict(state.to_dict()) == state


def test_gaussian_state_missing_field():
    """Test that a missing field is a ConfigError."""
    with pytest.raises(ConfigError, match="missing"):
        GaussianState.from_dict({"mean_phi": 1.0})


def test_classical_state_must_be_finite():
    """Test that non-finite classical states are rejected."""
    with pytest.raises(ValueError):
        ClassicalState(phi=float("nan"), q=0.0, mu=0.0)


def test_classical_energy():
    """Test the circuit energy (q^2 + phi^2) / 2."""
    assert ClassicalState(phi=3.0, q=4.0, mu=0.0).energy == pytest.approx(12.5)
