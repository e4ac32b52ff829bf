"""Loading the dataset of an experiment and labeling artifacts."""

import logging
from typing import Dict, Optional, Tuple

from satcn import __version__
from satcn.core.errors import ConfigError
from satcn.core.models import ExperimentConfig
from satcn.graph import SensorSet
from satcn.io import generate_synthetic, read_panel_csv, read_sensor_csv
from satcn.sampling import TimeSeriesPanel

logger = logging.getLogger("satcn")


def artifact_meta(config_hash: str, seed: int, **extra) -> Dict[str, object]:
    """Return the metadata written in front of every artifact."""
    return {"satcn": __version__, "config_hash": config_hash, "seed": seed, **extra}


def load_dataset(
    config: ExperimentConfig,
) -> Tuple[SensorSet, TimeSeriesPanel, Optional[TimeSeriesPanel]]:
    """Return sensors, panel and (for synthetic data) the noiseless truth.

    Without data files the synthetic field of the configuration is used. The
    sensor set is reordered to the column order of the panel.

    Raises:
        ConfigError: if only one of the two data files is given.

    """
    data = config.data
    if data.panel_file is None and data.sensor_file is None:
        logger.info("No data files configured, using a synthetic field.")
        return generate_synthetic(config.synthetic)
    if data.panel_file is None or data.sensor_file is None:
        raise ConfigError("Both a panel file and a sensor file are required.")

    panel = read_panel_csv(data.panel_file)
    sensors = read_sensor_csv(data.sensor_file, data.metric)
    s = sensors.subset(sensors.index_of(panel.ids))
    logger.info(
        f"Loaded {panel.n} sensors x {panel.T} steps from '{data.panel_file}'."
    )
    return s, panel, None
