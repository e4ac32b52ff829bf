"""Commands for satcn."""

from .data import artifact_meta, load_dataset
from .evaluate import run_evaluation
from .gradcheck import run_gradcheck
from .krige import krige_to_csv
from .synth import write_synthetic
from .train import train_model

__all__ = [
    "artifact_meta",
    "krige_to_csv",
    "load_dataset",
    "run_evaluation",
    "run_gradcheck",
    "train_model",
    "write_synthetic",
]
