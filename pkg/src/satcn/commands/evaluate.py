"""Run a scenario end to end: SATCN against the kNN baseline."""

import logging
from typing import List

import pandas as pd

from satcn.core.log import log_duration
from satcn.core.models import ExperimentConfig
from satcn.evaluation import (
    ScoredMethod,
    evaluate,
    knn_interpolate,
    make_scenario,
    metric_frame,
    write_metric_report,
)
from satcn.io import write_csv
from satcn.model import krige, save_model, train

from .data import artifact_meta, load_dataset

logger = logging.getLogger("satcn")


def run_evaluation(config: ExperimentConfig) -> pd.DataFrame:
    """Train on the training part of the scenario and score the test sensors.

    Both methods are scored on the test steps from the `u`-th one on, which
    SATCN can estimate from the test period alone. Writes `metrics.csv`,
    `report.md`, `history.csv` and the model to the output directory.

    Returns:
        metric frame with one row for SATCN and one per kNN `K`

    """
    s, panel, _ = load_dataset(config)
    scenario = make_scenario(panel, s, config.scenario)
    config_hash = config.config_hash()

    with log_duration("Training"):
        model, history = train(
            scenario.train_panel,
            scenario.train_sensors,
            config.train,
            config.arch,
            config_hash=config_hash,
        )
    u = model.u
    truth = scenario.test_truth.values[:, u:]
    mask = scenario.test_truth.obs_mask[:, u:]

    est = krige(model, scenario.test_observed, scenario.all_sensors, scenario.unknown)
    rows: List[ScoredMethod] = [
        ScoredMethod(method="SATCN", report=evaluate(est, truth, mask))
    ]
    for k in config.knn_k:
        knn = knn_interpolate(
            scenario.test_observed, scenario.all_sensors, scenario.unknown, k
        )
        rows.append(
            ScoredMethod(method="kNN", k=k, report=evaluate(knn[:, u:], truth, mask))
        )

    df = metric_frame(rows)
    out = config.output_dir
    meta = artifact_meta(
        config_hash,
        config.train.seed,
        scenario=config.scenario.name or "",
        time_frac=config.scenario.time_frac,
        space_frac=config.scenario.space_frac,
        missing_ratio=config.scenario.missing_ratio,
    )
    save_model(model, out / "model.satcn")
    history_meta = artifact_meta(config_hash, config.train.seed)
    write_csv(history.to_frame(), out / "history.csv", history_meta)
    write_metric_report(df, out, meta)
    return df
