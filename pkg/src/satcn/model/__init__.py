"""SATCN model: forward pass, training, kriging and model files."""

from .krige import krige
from .persist import load_model, model_from_bytes, model_to_bytes, save_model
from .satcn import (
    SatcnModel,
    forward_var,
    init_model,
    mae_loss,
    parameter_shapes,
    predict_normalized,
    satcn_forward,
)
from .training import Adam, TrainingHistory, train

__all__ = [
    "Adam",
    "SatcnModel",
    "TrainingHistory",
    "forward_var",
    "init_model",
    "krige",
    "load_model",
    "mae_loss",
    "model_from_bytes",
    "model_to_bytes",
    "parameter_shapes",
    "predict_normalized",
    "satcn_forward",
    "save_model",
    "train",
]
