"""Estimate unknown sensors with a trained model."""

import logging
from pathlib import Path
from typing import Optional, Sequence

import pandas as pd

from satcn.core.types import Metric
from satcn.io import read_panel_csv, read_sensor_csv, write_csv
from satcn.model import krige, load_model

from .data import artifact_meta

logger = logging.getLogger("satcn")


def krige_to_csv(
    model_file: Path,
    panel_file: Path,
    sensor_file: Path,
    unknown: Sequence[str],
    output_file: Path,
    *,
    metric: Optional[Metric] = None,
) -> pd.DataFrame:
    """Write the estimates of the unknown sensors as a panel CSV.

    The estimate of step `t` uses the observed steps `t - u ... t`, so the
    output starts at the `u`-th timestamp of the observed panel. An empty
    `unknown` list gives a CSV with only the timestamp column.
    """
    model = load_model(model_file)
    observed = read_panel_csv(panel_file)
    sensors = read_sensor_csv(sensor_file, metric)

    est = krige(model, observed, sensors, unknown)
    df = pd.DataFrame(est.T, columns=list(unknown))
    df.insert(0, "timestamp", list(observed.timestamps[model.u :]))
    if not unknown:
        df = df.iloc[0:0]

    meta = artifact_meta(model.config_hash, model.seed, model=Path(model_file).name)
    write_csv(df, output_file, meta)
    logger.info(
        f"[bold green]Estimated {len(unknown)} sensors over {est.shape[1]} steps, "
        f"written to '{output_file}'.[/bold green]"
    )
    return df
