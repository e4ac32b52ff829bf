"""Evaluate command of satcn."""

import logging
from pathlib import Path

import typer
from rich.console import Console

from satcn.commands import run_evaluation
from satcn.evaluation import best_row, metric_table

from .util import (
    config_file_option,
    dir_arg_config,
    existing_file_arg_config,
    resolved_config,
    wrap_exceptions,
)

logger = logging.getLogger("satcn")

app = typer.Typer()


@app.callback(invoke_without_command=True)
@wrap_exceptions
def evaluate(
    config_file: Path = config_file_option,
    scenario: str = typer.Option(
        None, "--scenario", "-S", help="Scenario name, e.g. 7T8S or 5T5S5M."
    ),
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
    seed: int = typer.Option(None, "--seed", help="Seed for all random choices."),
    iterations: int = typer.Option(
        None, "--iterations", "-n", help="Maximum number of training iterations."
    ),
):
    """Run a scenario end to end and write a metric table (SATCN and kNN)."""
    config = resolved_config(
        config_file,
        **{
            "scenario.name": scenario,
            "data.panel_file": panel_file,
            "data.sensor_file": sensor_file,
            "output_dir": output_dir,
            "seed": seed,
            "train.iterations": iterations,
        },
    )
    df = run_evaluation(config)
    Console().print(metric_table(df, title=f"Scenario {config.scenario.name or ''}"))
    best = best_row(df)
    logger.info(
        f"[bold green]Best: {best['method']} (MAE {best['mae']:.6f}), "
        f"metrics written to '{config.output_dir}'.[/bold green]"
    )
