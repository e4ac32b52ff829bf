"""Synth command of satcn."""

import logging
from pathlib import Path

import typer

from satcn.commands import write_synthetic

from .util import config_file_option, dir_arg_config, resolved_config, wrap_exceptions

logger = logging.getLogger("satcn")

app = typer.Typer()


@app.callback(invoke_without_command=True)
@wrap_exceptions
def synth(
    config_file: Path = config_file_option,
    output_dir: Path = typer.Option(
        None,
        "--output-dir",
        "-o",
        help="Output directory (default: satcn-out).",
        **dir_arg_config,
    ),
    n: int = typer.Option(None, "--sensors", "-n", help="Number of sensors."),
    steps: int = typer.Option(None, "--steps", "-T", help="Number of time steps."),
    n_basis: int = typer.Option(
        None, "--basis", help="Number of spatial basis functions."
    ),
    length_scale: float = typer.Option(
        None, "--length-scale", help="Length scale of the spatial basis functions."
    ),
    noise_std: float = typer.Option(None, "--noise-std", help="Noise std."),
    noise_relative: bool = typer.Option(
        None,
        "--noise-relative/--noise-absolute",
        help="Noise std relative to the signal std.",
    ),
    seed: int = typer.Option(None, "--seed", help="Seed of the generator."),
):
    """Write a synthetic dataset (sensors.csv, panel.csv, truth.csv)."""
    config = resolved_config(
        config_file,
        **{
            "output_dir": output_dir,
            "seed": seed,
            "synthetic.n": n,
            "synthetic.T": steps,
            "synthetic.n_basis": n_basis,
            "synthetic.length_scale": length_scale,
            "synthetic.noise_std": noise_std,
            "synthetic.noise_relative": noise_relative,
        },
    )
    write_synthetic(config, config.output_dir)
