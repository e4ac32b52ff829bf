"""Gradcheck command of satcn."""

import logging
from pathlib import Path
from typing import Optional

import typer

from satcn.commands import run_gradcheck

from .util import config_file_option, resolved_config, wrap_exceptions

logger = logging.getLogger("satcn")

app = typer.Typer()


@app.callback(invoke_without_command=True)
@wrap_exceptions
def gradcheck(
    config_file: Path = config_file_option,
    n: int = typer.Option(6, "--sensors", "-n", help="Number of sensors.", min=2),
    h: int = typer.Option(4, "--steps", "-h", help="Number of output steps.", min=1),
    seed: int = typer.Option(0, "--seed", help="Seed of the random instance."),
    step: float = typer.Option(1e-5, "--step", help="Finite difference step."),
    tolerance: float = typer.Option(
        1e-4, "--tolerance", help="Largest accepted relative error."
    ),
    max_coords: Optional[int] = typer.Option(
        None,
        "--max-coords",
        help="Check only this many random coordinates per tensor (default: all).",
        min=1,
    ),
):
    """Compare the gradients of the architecture with finite differences."""
    config = resolved_config(config_file)
    report = run_gradcheck(
        config.arch,
        n=n,
        h=h,
        seed=seed,
        step=step,
        tolerance=tolerance,
        max_coords=max_coords,
    )
    checked = sum(report.checked.values())
    typer.echo(
        f"gradcheck passed: {checked} coordinates in {len(report.errors)} tensors, "
        f"max relative error {report.max_error:.3e}"
    )
