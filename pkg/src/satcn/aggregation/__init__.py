"""Spatial aggregation: aggregators, scalers and the SAN layer."""

from .aggregators import (
    EPSILON,
    GraphBatch,
    aggregate,
    aggregate_var,
    compute_deg,
    scale,
    scale_var,
)
from .san import SanLayerParams, san_forward, san_layer, slice_graphs

__all__ = [
    "EPSILON",
    "GraphBatch",
    "SanLayerParams",
    "aggregate",
    "aggregate_var",
    "compute_deg",
    "san_forward",
    "san_layer",
    "scale",
    "scale_var",
    "slice_graphs",
]
