"""
GroDiv - Command Line
Root click group: global options, logging sink, config loading and the
error to exit-code mapping (0 success, 1 verification failure, 2 usage
error, 3 budget exhausted).
"""

import json
from pathlib import Path
from typing import Optional

import click
from dotenv import load_dotenv
from loguru import logger

from .. import __version__
from ..errors import BudgetExhausted, GroDivError
from .check_commands import check_group
from .context import LOG_LEVEL_ENV_VAR, LOG_LEVELS, CliState, configure_logging
from .divergence_commands import ball_command, div_command, div_table_command, gersten_command, morse_command
from .sl3_commands import sl3_group


class GroDivGroup(click.Group):
    """Maps GroDivError subclasses to their exit codes."""

    def invoke(self, ctx: click.Context):
        try:
            return super().invoke(ctx)
        except GroDivError as e:
            logger.error(f"{type(e).__name__}: {e}")
            click.echo(f"Error: {e}", err=True)
            if isinstance(e, BudgetExhausted):
                click.echo(json.dumps(e.stats()), err=True)
            ctx.exit(e.exit_code)


@click.group(cls=GroDivGroup)
@click.option("--log-level", envvar=LOG_LEVEL_ENV_VAR, default="INFO", show_default=True,
              type=click.Choice(LOG_LEVELS, case_sensitive=False))
@click.option("--quiet", is_flag=True, help="Disable progress bars.")
@click.option("--config", "config_path", type=click.Path(dir_okay=False, path_type=Path), default=None,
              help="Flat key-value config file (JSON or YAML); flags override it.")
@click.option("--jobs", type=click.IntRange(min=1), default=None, help="Worker processes (default 1).")
@click.version_option(__version__, prog_name="grodiv")
@click.pass_context
def cli(ctx: click.Context, log_level: str, quiet: bool, config_path: Optional[Path], jobs: Optional[int]):
    """GroDiv: divergence of finitely generated groups and SL3(Z) trajectories."""
    configure_logging(log_level)
    ctx.obj = CliState.load(config_path, jobs, quiet)


cli.add_command(ball_command)
cli.add_command(div_command)
cli.add_command(div_table_command)
cli.add_command(gersten_command)
cli.add_command(morse_command)
cli.add_command(sl3_group)
cli.add_command(check_group)


def main():
    load_dotenv()
    cli(prog_name="grodiv")


if __name__ == "__main__":
    main()
