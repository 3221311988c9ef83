"""Drift, diffusion and damping-rate functions of the conditioned moment equations.

Every function is pure and works unchanged on scalar states (GaussianState,
ClassicalState) and on batches whose fields are numpy arrays of trajectories.
Units: circuit frequency, vacuum charge and vacuum flux are all 1.

Conditioned moments of a Gaussian state, measured in charge with projection
frequency tau and damped at the state-dependent rate gamma(mu):

    d<phi> = <q> dt + sqrt(8 tau) C dW
    d<q>   = (-<phi> - 2 gamma <q>) dt + sqrt(8 tau) V_q dW
    dV_phi = (2 C + 2 tau (1 - 4 C^2)) dt
    dV_q   = (-2 C - 4 gamma (V_q - lambda) - 8 tau V_q^2) dt
    dC     = (V_q - V_phi - C (2 gamma + 8 tau V_q)) dt
    dmu    = nu (<q> dt + dW / sqrt(8 tau))
    gamma  = gamma0 (1 + epsilon cos mu)
"""

from dataclasses import dataclass
from typing import Callable, Optional, Protocol, Tuple, Union

import numpy as np

from qmemsim.models.params import SimParams

Scalar = Union[float, np.ndarray]
RateLaw = Callable[[Scalar], Scalar]


class MomentsLike(Protocol):
    """Anything carrying the six Gaussian-state fields (scalars or arrays)."""

    mean_phi: Scalar
    mean_q: Scalar
    var_phi: Scalar
    var_q: Scalar
    cov: Scalar
    mu: Scalar


class ClassicalLike(Protocol):
    phi: Scalar
    q: Scalar
    mu: Scalar


@dataclass(frozen=True)
class DriftIncrement:
    """Deterministic rates of the six state components."""

    d_mean_phi: Scalar
    d_mean_q: Scalar
    d_var_phi: Scalar
    d_var_q: Scalar
    d_cov: Scalar
    d_mu: Scalar


@dataclass(frozen=True)
class DiffusionCoefficients:
    """Coefficients multiplying the single Wiener increment shared by all components."""

    g_mean_phi: Scalar
    g_mean_q: Scalar
    g_mu: Scalar


def damping_rate(mu: Scalar, gamma0: float, epsilon: float) -> Scalar:
    """gamma0 * (1 + epsilon * cos(mu)); lies in [gamma0(1-eps), gamma0(1+eps)]."""
    return gamma0 * (1.0 + epsilon * np.cos(mu))


def _gamma(mu: Scalar, params: SimParams, rate_law: Optional[RateLaw]) -> Scalar:
    if rate_law is None:
        return damping_rate(mu, params.gamma0, params.epsilon)
    return rate_law(mu)


def drift(
    state: MomentsLike, params: SimParams, rate_law: Optional[RateLaw] = None
) -> DriftIncrement:
    """Deterministic part of the conditioned moment equations, gamma at state.mu."""
    gamma = _gamma(state.mu, params, rate_law)
    tau = params.tau
    cov = state.cov
    var_q = state.var_q
    return DriftIncrement(
        d_mean_phi=state.mean_q,
        d_mean_q=-state.mean_phi - 2.0 * gamma * state.mean_q,
        d_var_phi=2.0 * cov + 2.0 * tau * (1.0 - 4.0 * cov * cov),
        d_var_q=-2.0 * cov - 4.0 * gamma * (var_q - params.lambda_) - 8.0 * tau * var_q * var_q,
        d_cov=(var_q - state.var_phi) - cov * (2.0 * gamma + 8.0 * tau * var_q),
        d_mu=params.nu * state.mean_q,
    )


def diffusion(state: MomentsLike, params: SimParams) -> DiffusionCoefficients:
    """Noise coefficients of <phi>, <q> and mu; the second moments carry none."""
    root = np.sqrt(8.0 * params.tau)
    return DiffusionCoefficients(
        g_mean_phi=root * state.cov,
        g_mean_q=root * state.var_q,
        g_mu=params.nu / root,
    )


def classical_rhs(
    state: ClassicalLike, params: SimParams, rate_law: Optional[RateLaw] = None
) -> Tuple[Scalar, Scalar, Scalar]:
    """(dphi/dt, dq/dt, dmu/dt) of the classical LC-memristor circuit."""
    gamma = _gamma(state.mu, params, rate_law)
    return (
        state.q,
        -state.phi - 2.0 * gamma * state.q,
        params.nu * state.q,
    )


def mean_energy(state: MomentsLike) -> Scalar:
    """Expectation of H = (q^2 + phi^2) / 2 for a Gaussian state."""
    return 0.5 * (state.mean_q**2 + state.mean_phi**2 + state.var_q + state.var_phi)
