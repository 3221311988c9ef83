"""Unit tests for stationary moments and the noise-sum optimization."""

import math

import numpy as np
import pytest

from qmemsim.models import BracketError, ConfigError
from qmemsim.services.analysis.stationary import (
    noise_components,
    noise_sum,
    optimize_tau,
    stationary_moments,
)


def test_reference_values():
    """Test the stationary moments at tau = 0.2, gamma0 = 0.1, lambda = 10."""
    m = stationary_moments(0.1, 10.0, 0.2)
    assert m.c_st == pytest.approx(-0.17539, abs=1e-5)
    assert m.vq_st == pytest.approx(1.52874, abs=2e-5)
    assert m.vphi_st == pytest.approx(1.99283, abs=2e-5)


def test_matches_unrationalized_closed_form():
    """Test the rationalized expressions against the textbook forms."""
    gamma0, lam, tau = 0.1, 10.0, 0.7
    c = -(math.sqrt(1 + 16 * tau**2) - 1) / (8 * tau)
    vq = (math.sqrt(gamma0**2 + 4 * tau * (2 * gamma0 * lam - c)) - gamma0) / (4 * tau)
    m = stationary_moments(gamma0, lam, tau)
    assert m.c_st == pytest.approx(c, rel=1e-12)
    assert m.vq_st == pytest.approx(vq, rel=1e-12)


def test_small_tau_limit():
    """Test c_st -> 0 and vq_st -> lambda as tau -> 0."""
    m = stationary_moments(0.1, 10.0, 1e-9)
    assert abs(m.c_st) < 1e-8
    assert m.vq_st == pytest.approx(10.0, rel=1e-6)


def test_strong_measurement_squeezes_charge():
    """Test vq_st < 1/2 at tau = 4."""
    m = stationary_moments(0.1, 10.0, 4.0)
    assert m.vq_st < 0.5
    assert m.vq_st == pytest.approx(0.387, abs=1e-3)


def test_invariants():
    """Test c_st <= 0 and positive variances over a range of tau."""
    for tau in np.logspace(-3, 2, 30):
        m = stationary_moments(0.1, 10.0, float(tau))
        assert m.c_st <= 0
        assert m.vq_st > 0
        assert m.vphi_st > 0


def test_requires_positive_inputs():
    """Test that non-positive inputs are rejected."""
    with pytest.raises(ConfigError):
        stationary_moments(0.0, 10.0, 0.2)


def test_noise_sum_reference_value():
    """Test D(0.2) for gamma0 = 0.1, lambda = 10."""
    assert noise_sum(0.2, 0.1, 10.0) == pytest.approx(2.946, abs=1e-3)


def test_noise_components_add_up():
    """Test that the three terms sum to D."""
    parts = noise_components(0.3, 0.1, 10.0)
    assert parts.total == pytest.approx(noise_sum(0.3, 0.1, 10.0))
    assert parts.measurement == pytest.approx(1 / math.sqrt(2.4))


def test_noise_sum_diverges_at_both_ends():
    """Test growth of D towards tau -> 0 and tau -> infinity."""
    assert noise_sum(1e-6, 0.1, 10.0) > 100
    assert noise_sum(10.0, 0.1, 10.0) < noise_sum(100.0, 0.1, 10.0)
    assert noise_sum(100.0, 0.1, 10.0) > 10


def test_optimal_tau():
    """Test tau_opt near 0.2 for gamma0 = 0.1, lambda = 10."""
    report = optimize_tau(0.1, 10.0)
    assert 0.15 <= report.tau_opt <= 0.25
    assert not report.fallback
    assert report.bracket == (1e-3, 10.0)


def test_minimum_below_every_scanned_value():
    """Test D(tau_opt) <= D(tau) for all scanned tau."""
    for lam in (1.0, 10.0, 50.0):
        report = optimize_tau(0.1, lam)
        assert report.d_min <= min(d for _, d in report.samples) + 1e-9


def test_matches_dense_grid():
    """Test the minimizer against a dense log-spaced grid."""
    report = optimize_tau(0.1, 1.0)
    taus = np.logspace(-3, 1, 10_000)
    values = np.array([noise_sum(float(t), 0.1, 1.0) for t in taus])
    assert report.tau_opt == pytest.approx(taus[np.argmin(values)], rel=2e-3)
    assert report.tau_opt != pytest.approx(optimize_tau(0.1, 10.0).tau_opt, rel=1e-3)


def test_narrower_bracket_gives_same_minimizer():
    """Test that shrinking the bracket around tau_opt keeps the minimizer."""
    report = optimize_tau(0.1, 10.0)
    narrow = optimize_tau(0.1, 10.0, bracket=(report.tau_opt / 2, report.tau_opt * 2))
    assert narrow.tau_opt == pytest.approx(report.tau_opt, rel=2e-4)


def test_boundary_minimum_falls_back_to_grid(caplog):
    """Test the grid fallback when the minimum sits at the bracket edge."""
    with caplog.at_level("WARNING", logger="qmemsim"):
        report = optimize_tau(0.1, 10.0, bracket=(1.0, 10.0))
    assert report.fallback
    assert report.tau_opt == pytest.approx(1.0)
    assert "falling back" in caplog.text


def test_strict_mode_raises():
    """Test that strict mode propagates the bracket error."""
    with pytest.raises(BracketError):
        optimize_tau(0.1, 10.0, bracket=(1.0, 10.0), strict=True)


def test_invalid_bracket():
    """Test that an inverted bracket is a ConfigError."""
    with pytest.raises(ConfigError):
        optimize_tau(0.1, 10.0, bracket=(1.0, 0.1))
