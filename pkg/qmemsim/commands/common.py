"""Options and error handling shared by every command."""

import time
from typing import Any, Callable, Dict, Optional, Sequence

import click

from qmemsim.config import logger
from qmemsim.models.errors import AnalysisError, ConfigError, SimulationError
from qmemsim.presets import PRESETS
from qmemsim.services.inout.manifest_service import ManifestManager
from qmemsim.services.inout.params_loader import ResolvedRun, parse_overrides, resolve_run
from qmemsim.services.inout.run_repository import RunRepository

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_RUNTIME = 2

F = Callable[..., Any]


def parameter_options(func: F) -> F:
    """--preset, --config, --set and --out."""
    func = click.option(
        "--out",
        "out_dir",
        required=True,
        type=click.Path(file_okay=False),
        help="Output directory.",
    )(func)
    func = click.option(
        "--set",
        "overrides",
        multiple=True,
        metavar="KEY=VALUE",
        help="Override one parameter; repeatable.",
    )(func)
    func = click.option(
        "--config",
        "config_path",
        type=click.Path(dir_okay=False),
        help="JSON parameter file.",
    )(func)
    func = click.option(
        "--preset",
        type=click.Choice(sorted(PRESETS)),
        help="Named parameter set.",
    )(func)
    return func


def ensemble_options(func: F) -> F:
    """--seed, --traj, --workers and --record-stride."""
    func = click.option(
        "--record-stride", type=int, help="Integration steps between stored samples."
    )(func)
    func = click.option(
        "--workers", type=int, default=None, help="Concurrent trajectory batches."
    )(func)
    func = click.option("--traj", type=int, help="Number of trajectories.")(func)
    func = click.option("--seed", type=int, help="Master seed (unsigned 64-bit).")(func)
    return func


def resolve(
    preset: Optional[str],
    config_path: Optional[str],
    overrides: Sequence[str],
    seed: Optional[int] = None,
    traj: Optional[int] = None,
    record_stride: Optional[int] = None,
) -> ResolvedRun:
    """Preset, then parameter file, then --set, then the dedicated flags."""
    values: Dict[str, Any] = parse_overrides(overrides)
    for key, flag in (("master_seed", seed), ("n_traj", traj), ("record_stride", record_stride)):
        if flag is not None:
            values[key] = flag
    return resolve_run(preset=preset, config_path=config_path, overrides=values)


def execute(command: str, out_dir: str, body: Callable[[RunRepository], None]) -> None:
    """Run body against the output directory, then write the manifest.

    ConfigError exits with 1; SimulationError and AnalysisError exit with 2.
    """
    start = time.perf_counter()
    try:
        body(RunRepository(out_dir))
    except ConfigError as e:
        logger.error("Configuration error in %s: %s", command, e)
        click.echo(f"Error: {e}", err=True)
        raise click.exceptions.Exit(EXIT_CONFIG) from e
    except (SimulationError, AnalysisError) as e:
        logger.error("Error during %s: %s", command, e)
        click.echo(f"Error: {e}", err=True)
        raise click.exceptions.Exit(EXIT_RUNTIME) from e
    ManifestManager(out_dir).write(time.perf_counter() - start, command)


class CliGroup(click.Group):
    """Group whose usage errors share the configuration exit code."""

    def make_context(self, *args: Any, **kwargs: Any) -> click.Context:
        try:
            return super().make_context(*args, **kwargs)
        except click.UsageError as e:
            e.exit_code = EXIT_CONFIG
            raise

    def invoke(self, ctx: click.Context) -> Any:
        try:
            return super().invoke(ctx)
        except click.UsageError as e:
            e.exit_code = EXIT_CONFIG
            raise
