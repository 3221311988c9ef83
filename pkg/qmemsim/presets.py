"""Named parameter sets and initial states.

fig3a/fig3b/fig3c are the three measurement regimes of the hysteresis
comparison (weak, optimal and strong projection frequency). `squeeze` is a
low-temperature, weakly damped circuit whose initial state is squeezed in
charge, used to observe the squeezing axis rotate between charge and flux.
"""

import math
from dataclasses import dataclass
from typing import Dict

from qmemsim.models.errors import ConfigError
from qmemsim.models.params import SimParams
from qmemsim.models.states import GaussianState


@dataclass(frozen=True)
class Preset:
    params: SimParams
    initial_state: GaussianState
    description: str


FIG3_INITIAL = GaussianState(mean_phi=20.0, mean_q=0.0, var_phi=0.5, var_q=0.5, cov=0.0, mu=0.0)

SQUEEZE_INITIAL = GaussianState(mean_phi=20.0, mean_q=0.0, var_phi=0.9, var_q=0.3, cov=0.0, mu=0.0)


def _fig3(tau: float) -> SimParams:
    return SimParams(
        gamma0=0.1,
        epsilon=0.5,
        lambda_=10.0,
        nu=0.1,
        tau=tau,
        dt=1e-3,
        t_final=6.0 * math.pi,
        n_traj=3000,
        master_seed=1,
        record_stride=10,
    )


PRESETS: Dict[str, Preset] = {
    "fig3a": Preset(_fig3(0.005), FIG3_INITIAL, "weak measurement, tau = 0.005"),
    "fig3b": Preset(_fig3(0.2), FIG3_INITIAL, "optimal measurement, tau = 0.2"),
    "fig3c": Preset(_fig3(4.0), FIG3_INITIAL, "strong measurement, tau = 4"),
    "squeeze": Preset(
        SimParams(
            gamma0=0.01,
            epsilon=0.5,
            lambda_=0.5,
            nu=0.1,
            tau=0.01,
            dt=1e-3,
            t_final=4.0 * math.pi,
            n_traj=200,
            master_seed=1,
            record_stride=10,
        ),
        SQUEEZE_INITIAL,
        "low temperature, charge-squeezed initial state",
    ),
}


def get_preset(name: str) -> Preset:
    """Look up a preset by name; unknown names are a ConfigError."""
    try:
        return PRESETS[name]
    except KeyError:
        raise ConfigError(
            f"unknown preset {name!r}; choose from {', '.join(sorted(PRESETS))}"
        ) from None
