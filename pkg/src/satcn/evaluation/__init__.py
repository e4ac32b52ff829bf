"""Baselines, metrics and train/test scenarios."""

from .knn import knn_interpolate
from .metrics import MetricReport, evaluate
from .report import (
    ScoredMethod,
    best_row,
    metric_frame,
    metric_table,
    render_markdown,
    write_metric_report,
)
from .scenario import Scenario, make_scenario

__all__ = [
    "MetricReport",
    "Scenario",
    "ScoredMethod",
    "best_row",
    "evaluate",
    "knn_interpolate",
    "make_scenario",
    "metric_frame",
    "metric_table",
    "render_markdown",
    "write_metric_report",
]
