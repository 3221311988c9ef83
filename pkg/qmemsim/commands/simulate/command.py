"""
simulate: ensemble of conditioned trajectories with its hysteresis analysis.
"""

from typing import Any, Dict, Optional, Sequence

import click
import numpy as np

from qmemsim.commands.common import ensemble_options, execute, parameter_options, resolve
from qmemsim.config import BATCH_SIZE, WORKERS, logger
from qmemsim.models.errors import AnalysisError
from qmemsim.services.analysis.diagnostics import (
    collapse_time,
    deviation_at_crossings,
    localization_window,
    memory_window_check,
    squeezing_crossings,
    typical_charge,
)
from qmemsim.services.analysis.hysteresis import (
    PERIOD,
    classical_curve,
    compare_to_classical,
    hysteresis_curve,
    loop_area_first_period,
    loop_area_standard_error,
)
from qmemsim.services.analysis.stationary import stationary_moments
from qmemsim.services.inout.params_loader import ResolvedRun
from qmemsim.services.inout.run_repository import RunRepository
from qmemsim.services.physics.ensemble import (
    EnsembleResult,
    EnsembleRunner,
    non_markovianity_witness,
)
from qmemsim.services.physics.sde_engine import classical_from_gaussian, integrate_classical


def _loop_summary(result: EnsembleResult, run: ResolvedRun, with_classical: bool) -> Dict[str, Any]:
    stats = result.stats
    params = run.params
    summary: Dict[str, Any] = {
        "first_period_area": None,
        "first_period_area_se": None,
        "classical_agreement": None,
    }
    try:
        curve = hysteresis_curve(stats)
        summary["first_period_area"] = loop_area_first_period(curve, PERIOD)
        summary["first_period_area_se"] = loop_area_standard_error(curve, PERIOD)
        summary["lobe_count"] = len(curve.lobes)
        if with_classical:
            classical = integrate_classical(params, classical_from_gaussian(run.initial_state))
            agreement = compare_to_classical(curve, classical_curve(classical), PERIOD)
            summary["classical_agreement"] = agreement.to_dict()
    except AnalysisError as e:
        logger.warning("No hysteresis loop analysis for this run: %s", e)
    return summary


def _regime_summary(result: EnsembleResult, run: ResolvedRun) -> Dict[str, Any]:
    stats = result.stats
    params = run.params
    q_t = typical_charge(stats, PERIOD)
    summary: Dict[str, Any] = {
        "typical_charge": q_t,
        "localization_window": None,
        "memory_window": None,
    }
    if q_t > 0:
        summary["localization_window"] = list(localization_window(q_t))
        if params.gamma0 > 0:
            moments = stationary_moments(params.gamma0, params.lambda_, params.tau)
            report = memory_window_check(params, q_t, PERIOD, moments.vq_st, moments.c_st)
            summary["memory_window"] = report.to_dict()
    return summary


def run_simulation(
    run: ResolvedRun,
    repo: RunRepository,
    workers: int = WORKERS,
    samples: Sequence[int] = (0,),
    with_classical: bool = True,
    show_progress: bool = True,
) -> Dict[str, Any]:
    """Run the ensemble, write its CSV files and summary.json; returns the summary."""
    params = run.params
    keep = [k for k in samples if 0 <= k < params.n_traj]
    runner = EnsembleRunner(
        params,
        run.initial_state,
        workers=workers,
        batch_size=BATCH_SIZE,
        keep=keep,
        show_progress=show_progress,
    )
    result = runner.run()
    stats = result.stats
    repo.write_ensemble(stats)
    for index in sorted(result.trajectories):
        repo.write_trajectory(result.trajectories[index])

    summary: Dict[str, Any] = {
        "command": "simulate",
        "seed": params.master_seed,
        "batch_size": BATCH_SIZE,
        "collapse_time": collapse_time(stats),
        "passivity_min": float(np.min(stats.e_gamma_q2)),
        "non_markovian": non_markovianity_witness(stats),
        "deviation_at_crossings": [
            {"time": c.time, "delta": c.delta, "se": c.se} for c in deviation_at_crossings(stats)
        ],
        "squeezing_crossings": {
            str(index): squeezing_crossings(record)
            for index, record in sorted(result.trajectories.items())
        },
    }
    summary.update(run.to_dict())
    summary.update(_loop_summary(result, run, with_classical))
    summary.update(_regime_summary(result, run))
    repo.write_summary(summary, merge=False)
    return summary


@click.command("simulate")
@parameter_options
@ensemble_options
@click.option(
    "--sample",
    "--traj-out",
    "samples",
    type=int,
    multiple=True,
    default=(0,),
    show_default=True,
    help="Trajectory index to write as trajectory_<k>.csv; repeatable.",
)
@click.option(
    "--classical/--no-classical",
    default=True,
    help="Compare the ensemble loop with the classical circuit.",
)
@click.option("--quiet", is_flag=True, help="Hide the progress bar.")
def simulate_cmd(
    preset: Optional[str],
    config_path: Optional[str],
    overrides: Sequence[str],
    out_dir: str,
    seed: Optional[int],
    traj: Optional[int],
    workers: Optional[int],
    record_stride: Optional[int],
    samples: Sequence[int],
    classical: bool,
    quiet: bool,
) -> None:
    """Simulate an ensemble of measured quantum memristor trajectories."""

    def body(repo: RunRepository) -> None:
        run = resolve(preset, config_path, overrides, seed, traj, record_stride)
        summary = run_simulation(
            run,
            repo,
            workers=WORKERS if workers is None else workers,
            samples=samples,
            with_classical=classical,
            show_progress=not quiet,
        )
        click.echo(
            f"first-period area {summary['first_period_area']} "
            f"(se {summary['first_period_area_se']}), collapse time {summary['collapse_time']}"
        )

    execute("simulate", out_dir, body)
