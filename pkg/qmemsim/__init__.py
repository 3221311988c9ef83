"""
qmemsim command-line application factory.
"""

import click

from qmemsim.commands.common import CliGroup

# Import and register commands
from qmemsim.commands.simulate.command import simulate_cmd
from qmemsim.commands.classical.command import classical_cmd
from qmemsim.commands.tau_opt.command import tau_opt_cmd
from qmemsim.commands.convergence.command import convergence_cmd


def create_cli() -> click.Group:
    """Create and configure the command-line application."""

    @click.group(name="qmemsim", cls=CliGroup)
    @click.version_option(package_name="qmemsim")
    def cli() -> None:
        """Simulate a continuously measured quantum memristor."""

    cli.add_command(simulate_cmd)
    cli.add_command(classical_cmd)
    cli.add_command(tau_opt_cmd)
    cli.add_command(convergence_cmd)

    return cli


def main() -> None:
    """Console-script entry point."""
    create_cli()()
