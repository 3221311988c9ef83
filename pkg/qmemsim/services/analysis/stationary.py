"""Stationary second moments and the noise-sum criterion for the projection
frequency.

With the damping rate frozen at its mean gamma0, the second-moment equations
have the closed-form fixed point

    C_st   = -(sqrt(1 + 16 tau^2) - 1) / (8 tau)
    V_q^st = (sqrt(gamma0^2 + 4 tau (2 gamma0 lambda - C_st)) - gamma0) / (4 tau)
    V_phi^st = V_q^st - C_st (2 gamma0 + 8 tau V_q^st)

and the diffusive noise entering the first moments and mu adds up to
D(tau) = sqrt(8 tau) V_q + sqrt(8 tau) |C| + 1 / sqrt(8 tau).
"""

import math
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from qmemsim.config import logger
from qmemsim.models.errors import BracketError, ConfigError
from qmemsim.utils.numerics import golden_section

DEFAULT_BRACKET = (1e-3, 10.0)
DEFAULT_SCAN_POINTS = 200
REL_TOL = 1e-4


@dataclass(frozen=True)
class StationaryMoments:
    c_st: float
    vq_st: float
    vphi_st: float


@dataclass(frozen=True)
class NoiseComponents:
    """The three diffusive terms whose sum is the noise sum D."""

    back_action_q: float
    back_action_phi: float
    measurement: float

    @property
    def total(self) -> float:
        return self.back_action_q + self.back_action_phi + self.measurement


def stationary_moments(gamma0: float, lambda_: float, tau: float) -> StationaryMoments:
    """Closed-form fixed point of the second-moment equations at gamma = gamma0."""
    if not (tau > 0 and gamma0 > 0 and lambda_ > 0):
        raise ConfigError("stationary moments need positive tau, gamma0 and lambda")
    # Rationalized forms of the expressions above; no cancellation at small tau.
    c_st = -2.0 * tau / (math.sqrt(1.0 + 16.0 * tau * tau) + 1.0)
    radicand = gamma0 * gamma0 + 4.0 * tau * (2.0 * gamma0 * lambda_ - c_st)
    vq_st = (2.0 * gamma0 * lambda_ - c_st) / (math.sqrt(radicand) + gamma0)
    vphi_st = vq_st - c_st * (2.0 * gamma0 + 8.0 * tau * vq_st)
    return StationaryMoments(c_st=c_st, vq_st=vq_st, vphi_st=vphi_st)


def noise_components(tau: float, gamma0: float, lambda_: float) -> NoiseComponents:
    """Back-action terms on <q> and <phi> and the measurement-noise term on mu."""
    moments = stationary_moments(gamma0, lambda_, tau)
    root = math.sqrt(8.0 * tau)
    return NoiseComponents(
        back_action_q=root * moments.vq_st,
        back_action_phi=root * abs(moments.c_st),
        measurement=1.0 / root,
    )


def noise_sum(tau: float, gamma0: float, lambda_: float) -> float:
    """D(tau) at the stationary second moments."""
    return noise_components(tau, gamma0, lambda_).total


@dataclass(frozen=True)
class TauOptReport:
    """Minimizer of the noise sum, with the log-spaced scan it was checked against.

    fallback is True when the scan was not unimodal with an interior minimum
    and tau_opt is the best scanned point instead of a refined minimizer.
    """

    tau_opt: float
    d_min: float
    bracket: Tuple[float, float]
    samples: List[Tuple[float, float]]
    fallback: bool = False


def _check_unimodal(taus: np.ndarray, values: np.ndarray) -> None:
    k = int(np.argmin(values))
    if k == 0 or k == len(values) - 1:
        raise BracketError(
            f"noise sum minimum sits at the bracket edge tau={taus[k]:.6g}"
        )
    steps = np.sign(np.diff(values))
    steps = steps[steps != 0]
    # Unimodal: every decreasing step comes before every increasing one.
    if steps.size and np.any(np.diff(steps) < 0):
        raise BracketError("noise sum is not unimodal on the bracket")


def optimize_tau(
    gamma0: float,
    lambda_: float,
    bracket: Tuple[float, float] = DEFAULT_BRACKET,
    n_scan: int = DEFAULT_SCAN_POINTS,
    rel_tol: float = REL_TOL,
    strict: bool = False,
) -> TauOptReport:
    """Minimize D(tau) by golden-section search in log(tau).

    A log-spaced scan of n_scan points first checks that D is unimodal with an
    interior minimum. If not, BracketError is raised when strict, otherwise a
    warning is logged and the best scanned point is returned.
    """
    low, high = float(bracket[0]), float(bracket[1])
    if not 0 < low < high or not math.isfinite(high):
        raise ConfigError(f"bracket must satisfy 0 < low < high, got ({low}, {high})")
    if n_scan < 3:
        raise ConfigError("tau scan needs at least 3 points")

    taus = np.logspace(math.log10(low), math.log10(high), n_scan)
    values = np.array([noise_sum(float(t), gamma0, lambda_) for t in taus])
    samples = [(float(t), float(d)) for t, d in zip(taus, values)]

    try:
        _check_unimodal(taus, values)
    except BracketError as e:
        if strict:
            raise
        k = int(np.argmin(values))
        logger.warning("%s; falling back to the grid minimum tau=%.6g", e, taus[k])
        return TauOptReport(
            tau_opt=float(taus[k]),
            d_min=float(values[k]),
            bracket=(low, high),
            samples=samples,
            fallback=True,
        )

    def objective(log_tau: float) -> float:
        return noise_sum(math.exp(log_tau), gamma0, lambda_)

    a, b = golden_section(objective, math.log(low), math.log(high), tol=math.log1p(rel_tol))
    tau_opt = math.exp(0.5 * (a + b))
    d_min = noise_sum(tau_opt, gamma0, lambda_)
    logger.info("Noise sum minimized at tau=%.6g (D=%.6g)", tau_opt, d_min)
    return TauOptReport(tau_opt=tau_opt, d_min=d_min, bracket=(low, high), samples=samples)
