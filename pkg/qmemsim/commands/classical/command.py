"""
classical: the LC-memristor circuit treated classically.
"""

from typing import Optional, Sequence

import click
import numpy as np

from qmemsim.commands.common import execute, parameter_options, resolve
from qmemsim.config import logger
from qmemsim.models.errors import AnalysisError
from qmemsim.services.analysis.hysteresis import PERIOD, classical_curve, loop_area_first_period
from qmemsim.services.inout.run_repository import RunRepository
from qmemsim.services.physics.sde_engine import classical_from_gaussian, integrate_classical


@click.command("classical")
@parameter_options
def classical_cmd(
    preset: Optional[str],
    config_path: Optional[str],
    overrides: Sequence[str],
    out_dir: str,
) -> None:
    """Integrate the classical circuit from the quantum initial means."""

    def body(repo: RunRepository) -> None:
        run = resolve(preset, config_path, overrides)
        trajectory = integrate_classical(run.params, classical_from_gaussian(run.initial_state))
        repo.write_classical(trajectory)
        try:
            area = loop_area_first_period(classical_curve(trajectory), PERIOD)
        except AnalysisError as e:
            logger.warning("No classical loop area: %s", e)
            area = None
        energy = trajectory.energy
        repo.write_summary(
            {
                "classical": {
                    "first_period_area": area,
                    "energy_drift": float(np.max(np.abs(energy - energy[0]))),
                },
                "classical_params": run.params.to_dict(),
            }
        )
        click.echo(f"classical first-period area {area}")

    execute("classical", out_dir, body)
