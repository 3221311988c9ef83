"""
convergence: step-size study of the ensemble damping rate.
"""

from typing import Optional, Sequence

import click

from qmemsim.commands.common import ensemble_options, execute, parameter_options, resolve
from qmemsim.config import WORKERS
from qmemsim.services.analysis.convergence import convergence_study
from qmemsim.services.inout.run_repository import RunRepository

DEFAULT_DTS = (4e-3, 2e-3, 1e-3, 5e-4)


@click.command("convergence")
@parameter_options
@ensemble_options
@click.option(
    "--dt",
    "dts",
    type=float,
    multiple=True,
    help="Step size; repeat from coarsest to finest [default: 4e-3 2e-3 1e-3 5e-4].",
)
def convergence_cmd(
    preset: Optional[str],
    config_path: Optional[str],
    overrides: Sequence[str],
    out_dir: str,
    seed: Optional[int],
    traj: Optional[int],
    workers: Optional[int],
    record_stride: Optional[int],
    dts: Sequence[float],
) -> None:
    """Compare ensemble damping rates across step sizes."""

    def body(repo: RunRepository) -> None:
        run = resolve(preset, config_path, overrides, seed, traj, record_stride)
        report = convergence_study(
            run.params,
            list(dts) or list(DEFAULT_DTS),
            run.initial_state,
            workers=WORKERS if workers is None else workers,
        )
        repo.write_convergence(report.to_frame())
        repo.write_summary(
            {
                "convergence": {
                    "dts": report.dts,
                    "max_gamma_gaps": report.max_gamma_gaps,
                    "monotone": report.monotone,
                    "record_interval": report.record_interval,
                },
                "convergence_params": run.params.to_dict(),
            }
        )
        click.echo(f"max gamma gaps {report.max_gamma_gaps} (monotone: {report.monotone})")

    execute("convergence", out_dir, body)
