"""Enumerations shared across satcn modules."""

from enum import Enum


class Metric(str, Enum):
    """How pairwise sensor distances are obtained."""

    euclidean = "euclidean"
    haversine = "haversine"
    precomputed = "precomputed"


class GraphKind(str, Enum):
    """Which adjacency rule produced a `NeighborGraph`."""

    masked = "masked"
    full = "full"
    time_varying = "time-varying"


class Activation(str, Enum):
    """Activation applied after a SAN layer."""

    relu = "relu"
    identity = "identity"


class Aggregator(str, Enum):
    """Neighborhood aggregators, in their fixed stacking order."""

    mean = "mean"
    weighted_mean = "weighted_mean"
    softmax = "softmax"
    softmin = "softmin"
    std = "std"
    mean_distance = "mean_distance"
    std_distance = "std_distance"


class Scaler(str, Enum):
    """Degree scalers, in their fixed stacking order."""

    identity = "identity"
    amplification = "amplification"
    attenuation = "attenuation"


AGGREGATORS = tuple(Aggregator)
"""All aggregators in stacking order."""

SCALERS = tuple(Scaler)
"""All scalers in stacking order."""
