"""Sensor distances and k-NN adjacency graphs."""

from .adjacency import (
    NeighborGraph,
    build_full_adjacency,
    build_masked_adjacency,
    build_time_varying_adjacency,
    build_time_varying_sequence,
)
from .sensors import EARTH_RADIUS_KM, SensorSet, build_distance_matrix

__all__ = [
    "EARTH_RADIUS_KM",
    "NeighborGraph",
    "SensorSet",
    "build_distance_matrix",
    "build_full_adjacency",
    "build_masked_adjacency",
    "build_time_varying_adjacency",
    "build_time_varying_sequence",
]
