"""Temporal convolution along the time axis."""

from .conv import TcnLayerParams, tcn_forward, tcn_layer

__all__ = ["TcnLayerParams", "tcn_forward", "tcn_layer"]
