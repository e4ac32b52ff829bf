"""Train a model on a dataset and write the model and its loss history."""

import logging
from pathlib import Path
from typing import Optional, Tuple

from satcn.core.log import log_duration
from satcn.core.models import ExperimentConfig
from satcn.io import write_csv
from satcn.model import SatcnModel, TrainingHistory, save_model, train

from .data import artifact_meta, load_dataset

logger = logging.getLogger("satcn")

MODEL_FILE = "model.satcn"
HISTORY_FILE = "history.csv"


def train_model(
    config: ExperimentConfig, model_file: Optional[Path] = None
) -> Tuple[SatcnModel, TrainingHistory, Path]:
    """Train on all sensors of the configured dataset.

    Writes the model file (default: `<output_dir>/model.satcn`) and the loss
    history CSV next to it.

    """
    s, panel, _ = load_dataset(config)
    config_hash = config.config_hash()
    train_cfg = config.train
    with log_duration("Training"):
        model, history = train(
            panel, s, train_cfg, config.arch, config_hash=config_hash
        )

    model_path = save_model(model, model_file or config.output_dir / MODEL_FILE)
    meta = artifact_meta(config_hash, train_cfg.seed)
    write_csv(history.to_frame(), model_path.parent / HISTORY_FILE, meta)
    logger.info(
        f"[bold green]Trained model written to '{model_path}' "
        f"({len(history)} iterations).[/bold green]"
    )
    return model, history, model_path
