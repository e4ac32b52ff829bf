"""Write a synthetic dataset as CSV files."""

import logging
from pathlib import Path
from typing import Dict

from satcn.core.models import ExperimentConfig
from satcn.io import generate_synthetic, write_panel_csv, write_sensor_csv

from .data import artifact_meta

logger = logging.getLogger("satcn")


def write_synthetic(config: ExperimentConfig, out_dir: Path) -> Dict[str, Path]:
    """Generate the configured synthetic field and write it to `out_dir`.

    Returns:
        paths of `sensors.csv`, `panel.csv` (noisy) and `truth.csv` (noiseless)

    """
    spec = config.synthetic
    s, panel, truth = generate_synthetic(spec)
    meta = artifact_meta(config.config_hash(), spec.seed)
    paths = {
        "sensors": write_sensor_csv(s, out_dir / "sensors.csv", meta),
        "panel": write_panel_csv(panel, out_dir / "panel.csv", meta),
        "truth": write_panel_csv(truth, out_dir / "truth.csv", meta),
    }
    logger.info(
        f"[bold green]Wrote synthetic dataset ({spec.n} sensors x {spec.T} steps) "
        f"to '{out_dir}'.[/bold green]"
    )
    return paths
