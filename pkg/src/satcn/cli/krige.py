"""Krige command of satcn."""

import logging
from pathlib import Path

import typer

from satcn.commands import krige_to_csv
from satcn.core.errors import ConfigError
from satcn.core.types import Metric
from satcn.io import read_id_list

from .util import existing_file_arg_config, file_arg_config, wrap_exceptions

logger = logging.getLogger("satcn")

app = typer.Typer()


@app.callback(invoke_without_command=True)
@wrap_exceptions
def krige(
    model_file: Path = typer.Option(
        ..., "--model", "-m", help="Trained model file.", **existing_file_arg_config
    ),
    panel_file: Path = typer.Option(
        ...,
        "--panel",
        "-p",
        help="Panel CSV of the observed sensors.",
        **existing_file_arg_config,
    ),
    sensor_file: Path = typer.Option(
        ...,
        "--sensors",
        "-s",
        help="Sensor CSV with the observed and the unknown sensors.",
        **existing_file_arg_config,
    ),
    unknown_file: Path = typer.Option(
        None,
        "--unknown",
        "-u",
        help="File with the ids of the sensors to estimate, one per line.",
        **existing_file_arg_config,
    ),
    ids: str = typer.Option(
        None, "--ids", help="Comma separated ids of the sensors to estimate."
    ),
    output_file: Path = typer.Option(
        ..., "--output", "-o", help="Estimate CSV to write.", **file_arg_config
    ),
    metric: Metric = typer.Option(
        None, "--metric", help="Distance metric of a coordinate sensor file."
    ),
):
    """Estimate the signals of unknown sensors with a trained model."""
    if unknown_file is not None and ids is not None:
        raise ConfigError("Pass either --unknown or --ids, not both.")
    if unknown_file is not None:
        unknown = read_id_list(unknown_file)
    else:
        unknown = [i.strip() for i in (ids or "").split(",") if i.strip()]
    logger.verbose(f"Estimating {len(unknown)} sensors.")
    krige_to_csv(
        model_file, panel_file, sensor_file, unknown, output_file, metric=metric
    )
