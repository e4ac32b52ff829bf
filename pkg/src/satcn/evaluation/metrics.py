"""Error metrics over the evaluated cells of an estimate."""

import numpy as np
from pydantic import BaseModel, Field
from typing_extensions import Annotated

from satcn.core.errors import DataError


class MetricReport(BaseModel):
    """RMSE and MAE over `count` evaluated cells."""

    model_config = dict(frozen=True, extra="forbid")

    rmse: Annotated[float, Field(ge=0, description="Root mean squared error.")]
    mae: Annotated[float, Field(ge=0, description="Mean absolute error.")]
    count: Annotated[int, Field(ge=1, description="Number of evaluated cells.")]


def evaluate(pred, truth, eval_mask) -> MetricReport:
    """Compute RMSE and MAE over the cells where `eval_mask` is true.

    Raises:
        DataError: if the shapes differ or the mask is empty.

    """
    pred = np.asarray(pred, dtype=np.float64)
    truth = np.asarray(truth, dtype=np.float64)
    eval_mask = np.asarray(eval_mask, dtype=bool)
    if not pred.shape == truth.shape == eval_mask.shape:
        raise DataError(
            f"Shapes differ: pred {pred.shape}, truth {truth.shape}, "
            f"mask {eval_mask.shape}."
        )
    count = int(eval_mask.sum())
    if count == 0:
        raise DataError("Evaluation mask selects no cell.")
    err = (pred - truth)[eval_mask]
    if not np.all(np.isfinite(err)):
        raise DataError("Estimates or truth contain non-finite evaluated cells.")
    return MetricReport(
        rmse=float(np.sqrt(np.mean(err * err))),
        mae=float(np.mean(np.abs(err))),
        count=count,
    )
