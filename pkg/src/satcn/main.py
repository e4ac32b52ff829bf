"""Entry point of the satcn command line interface."""

import logging
import sys
from typing import Optional

import typer

from satcn import __version__
from satcn.cli import evaluate, gradcheck, krige, synth, train
from satcn.core.log import SatcnLogLevel, init_log, set_log_level

logger = logging.getLogger("satcn")

# locals of failing frames hold whole panels
app = typer.Typer(pretty_exceptions_show_locals=False)


def _print_version(value: bool):
    """Show satcn version and exit."""
    if value:
        typer.echo(f"satcn version: {__version__}")
        raise typer.Exit()


@app.callback()
def main(
    version: Optional[bool] = typer.Option(
        None,
        "--version",
        help=_print_version.__doc__,
        callback=_print_version,
        is_eager=True,
    ),
    show_info: Optional[bool] = typer.Option(
        None, "--info", "-v", help="Log progress messages."
    ),
    verbose: Optional[bool] = typer.Option(
        None, "--verbose", "-vv", help="Also log per-iteration training messages."
    ),
    debug: Optional[bool] = typer.Option(
        None, "--debug", "-vvv", help="Also log debug messages and tracebacks."
    ),
):
    """Spatiotemporal kriging with SATCN."""
    init_log()

    flags = [show_info, verbose, debug]
    if sum(bool(f) for f in flags) > 1:
        typer.echo("Pass at most one of -v, -vv and -vvv.", file=sys.stderr)
        raise typer.Exit(1)
    # without a flag the config file decides
    if any(flags):
        set_log_level(
            SatcnLogLevel.from_flags(info=show_info, verbose=verbose, debug=debug)
        )


for name, command in [
    ("train", train),
    ("krige", krige),
    ("evaluate", evaluate),
    ("synth", synth),
    ("gradcheck", gradcheck),
]:
    app.add_typer(command.app, name=name)
