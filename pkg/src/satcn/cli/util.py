"""Utility functions for CLI commands."""

import logging
import traceback
from pathlib import Path
from typing import Optional

import typer
import wrapt
from pydantic import ValidationError
from rich.markup import escape
from rich.pretty import pretty_repr

from satcn.core.core import discover_input
from satcn.core.errors import ConfigError, SatcnError
from satcn.core.log import SatcnLogLevel, get_log_level, set_log_level
from satcn.core.models import ExperimentConfig

logger = logging.getLogger("satcn")


# configuration dicts for CLI file arguments
file_arg_config = dict(
    file_okay=True,
    dir_okay=False,
    writable=True,
    readable=True,
    resolve_path=True,
)
existing_file_arg_config = dict(file_arg_config)
existing_file_arg_config.update(dict(exists=True))

dir_arg_config = dict(file_okay=False, dir_okay=True, writable=True, resolve_path=True)

config_file_option = typer.Option(
    None,
    "--config",
    "-c",
    help="satcn config file (default: .satcn.toml, satcn.toml or pyproject.toml).",
    **existing_file_arg_config,
)


def exit_code_of(e: BaseException) -> int:
    """Map an exception to the exit code of the CLI."""
    if isinstance(e, SatcnError):
        return e.exit_code
    return 1


@wrapt.decorator
def wrap_exceptions(wrapped, instance, args, kwargs):
    """Format and log exceptions for cli commands."""
    try:
        return wrapped(*args, **kwargs)

    except typer.Exit:
        raise

    except Exception as e:
        # Escape the error message to prevent Rich from misinterpreting it
        escaped_error_message = escape(str(e))
        escaped_traceback = escape(traceback.format_exc())

        logger.error(f"[bold red]Error: {escaped_error_message}[/bold red]")
        logger.debug(f"[red]{escaped_traceback}[/red]")
        raise typer.Exit(code=exit_code_of(e)) from e


def resolved_config(config_file: Optional[Path] = None, **cli_args) -> ExperimentConfig:
    """Return the experiment config of defaults, config file and passed CLI args.

    CLI args use dotted keys for nested settings (e.g. `train.iterations`),
    and only args that are not None override the file.
    Will also adjust log levels accordingly.
    """
    try:
        input_file = discover_input(config_file)
        base = (
            ExperimentConfig.from_input_file(input_file)
            if input_file
            else ExperimentConfig()
        )
        config = base.merged(cli_args)
    except (FileNotFoundError, ValidationError, ValueError, RuntimeError) as e:
        if isinstance(e, SatcnError):
            raise
        raise ConfigError(f"Invalid configuration: {e}") from e

    # cli_log_level is None if the user did not pass a log level (-> "default")
    cli_log_level: Optional[SatcnLogLevel] = get_log_level()
    if cli_log_level is not None:
        config.update_log_level(cli_log_level)
    else:
        set_log_level(config.log_level())

    logger.debug(f"Combined config (Defaults + File + CLI):\n{pretty_repr(config)}")
    return config
