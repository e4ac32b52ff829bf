"""Time series panels and training sample generation."""

from .batch import (
    TrainingBatch,
    TrainingSample,
    generate_training_batch,
    window_starts,
)
from .panel import Normalization, TimeSeriesPanel

__all__ = [
    "Normalization",
    "TimeSeriesPanel",
    "TrainingBatch",
    "TrainingSample",
    "generate_training_batch",
    "window_starts",
]
