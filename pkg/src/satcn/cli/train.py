"""Train command of satcn."""

import logging
from pathlib import Path

import typer

from satcn.commands import train_model

from .util import (
    config_file_option,
    dir_arg_config,
    existing_file_arg_config,
    file_arg_config,
    resolved_config,
    wrap_exceptions,
)

logger = logging.getLogger("satcn")

app = typer.Typer()


@app.callback(invoke_without_command=True)
@wrap_exceptions
def train(
    config_file: Path = config_file_option,
    panel_file: Path = typer.Option(
        None,
        "--panel",
        "-p",
        help="Panel CSV (default: from config, or a synthetic field).",
        **existing_file_arg_config,
    ),
    sensor_file: Path = typer.Option(
        None,
        "--sensors",
        "-s",
        help="Sensor CSV (default: from config).",
        **existing_file_arg_config,
    ),
    output_dir: Path = typer.Option(
        None,
        "--output-dir",
        "-o",
        help="Output directory (default: satcn-out).",
        **dir_arg_config,
    ),
    model_file: Path = typer.Option(
        None,
        "--model",
        "-m",
        help="Model file to write (default: <output-dir>/model.satcn).",
        **file_arg_config,
    ),
    seed: int = typer.Option(None, "--seed", help="Seed for all random choices."),
    iterations: int = typer.Option(
        None, "--iterations", "-n", help="Maximum number of training iterations."
    ),
    batch_size: int = typer.Option(
        None, "--batch-size", "-b", help="Samples per iteration."
    ),
):
    """Train a SATCN model and write the model file and its loss history."""
    config = resolved_config(
        config_file,
        **{
            "data.panel_file": panel_file,
            "data.sensor_file": sensor_file,
            "output_dir": output_dir,
            "seed": seed,
            "train.iterations": iterations,
            "train.batch_size": batch_size,
        },
    )
    train_model(config, model_file)
