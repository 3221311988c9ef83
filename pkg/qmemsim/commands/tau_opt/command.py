"""
tau-opt: projection frequency minimizing the noise sum.
"""

from typing import Tuple

import click
import pandas as pd

from qmemsim.commands.common import execute
from qmemsim.services.analysis.stationary import (
    DEFAULT_BRACKET,
    DEFAULT_SCAN_POINTS,
    noise_components,
    optimize_tau,
    stationary_moments,
)
from qmemsim.services.inout.run_repository import RunRepository

TAU_SCAN_COLUMNS = ["tau", "D", "back_action_q", "back_action_phi", "measurement"]


@click.command("tau-opt")
@click.option("--gamma0", type=float, default=0.1, show_default=True)
@click.option("--lambda", "lambda_", type=float, default=10.0, show_default=True)
@click.option(
    "--bracket",
    type=(float, float),
    default=DEFAULT_BRACKET,
    show_default=True,
    help="Search interval for tau.",
)
@click.option("--n-scan", type=int, default=DEFAULT_SCAN_POINTS, show_default=True)
@click.option("--strict", is_flag=True, help="Fail instead of falling back to the grid minimum.")
@click.option("--out", "out_dir", required=True, type=click.Path(file_okay=False))
def tau_opt_cmd(
    gamma0: float,
    lambda_: float,
    bracket: Tuple[float, float],
    n_scan: int,
    strict: bool,
    out_dir: str,
) -> None:
    """Minimize the stationary noise sum D(tau)."""

    def body(repo: RunRepository) -> None:
        report = optimize_tau(gamma0, lambda_, bracket, n_scan=n_scan, strict=strict)
        rows = []
        for tau, d in report.samples:
            parts = noise_components(tau, gamma0, lambda_)
            rows.append((tau, d, parts.back_action_q, parts.back_action_phi, parts.measurement))
        repo.write_tau_scan(pd.DataFrame(rows, columns=TAU_SCAN_COLUMNS))
        moments = stationary_moments(gamma0, lambda_, report.tau_opt)
        repo.write_summary(
            {
                "tau_opt": report.tau_opt,
                "d_min": report.d_min,
                "bracket": list(report.bracket),
                "fallback": report.fallback,
                "gamma0": gamma0,
                "lambda": lambda_,
                "stationary_at_tau_opt": {
                    "c_st": moments.c_st,
                    "vq_st": moments.vq_st,
                    "vphi_st": moments.vphi_st,
                },
            }
        )
        click.echo(f"tau_opt {report.tau_opt:.6g} (D = {report.d_min:.6g})")

    execute("tau-opt", out_dir, body)
