"""Sensor sets and pairwise distance matrices."""

import hashlib
import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from satcn.core.errors import GraphError
from satcn.core.types import Metric

logger = logging.getLogger("satcn")

EARTH_RADIUS_KM: float = 6371.0
"""Earth radius used by the haversine metric."""


def _euclidean(coords: np.ndarray) -> np.ndarray:
    diff = coords[:, None, :] - coords[None, :, :]
    return np.sqrt(np.sum(diff * diff, axis=-1))


def _haversine(coords: np.ndarray) -> np.ndarray:
    lat = np.radians(coords[:, 0])
    lon = np.radians(coords[:, 1])
    dlat = lat[:, None] - lat[None, :]
    dlon = lon[:, None] - lon[None, :]
    a = np.sin(dlat / 2) ** 2 + np.cos(lat)[:, None] * np.cos(lat)[None, :] * (
        np.sin(dlon / 2) ** 2
    )
    return 2 * EARTH_RADIUS_KM * np.arcsin(np.sqrt(np.clip(a, 0.0, 1.0)))


_METRICS = {Metric.euclidean: _euclidean, Metric.haversine: _haversine}


def _readonly(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, dtype=np.float64, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class SensorSet:
    """Sensor identities with their pairwise distances.

    `d_max` is derived from `dist` and is the largest distance between two
    different sensors. Arrays are stored read-only, so a sensor set can be
    shared freely.
    """

    ids: Tuple[str, ...]
    dist: np.ndarray
    coords: Optional[np.ndarray] = None
    metric: Metric = Metric.precomputed
    d_max: float = field(init=False)

    def __post_init__(self):
        """Validate the distance matrix and compute `d_max`."""
        ids = tuple(str(i) for i in self.ids)
        dist = np.asarray(self.dist, dtype=np.float64)
        n = len(ids)
        if n < 2:
            raise GraphError(f"At least 2 sensors are required, got {n}.")
        if len(set(ids)) != n:
            raise GraphError("Sensor ids must be unique.")
        if dist.shape != (n, n):
            raise GraphError(f"Distance matrix must be {n}x{n}, got {dist.shape}.")
        if not np.all(np.isfinite(dist)):
            raise GraphError("Distance matrix contains non-finite entries.")
        if np.any(dist < 0):
            raise GraphError("Distance matrix contains negative entries.")
        if not np.allclose(dist, dist.T, rtol=1e-9, atol=0.0):
            raise GraphError("Distance matrix is not symmetric.")
        if np.any(np.diag(dist) != 0):
            raise GraphError("Distance matrix must be zero on the diagonal.")

        d_max = float(np.max(dist))
        if d_max <= 0:
            raise GraphError("All sensors are at the same position (d_max = 0).")

        object.__setattr__(self, "ids", ids)
        object.__setattr__(self, "dist", _readonly(dist))
        if self.coords is not None:
            object.__setattr__(self, "coords", _readonly(self.coords))
        object.__setattr__(self, "d_max", d_max)

    def __len__(self) -> int:
        """Return the number of sensors."""
        return len(self.ids)

    @property
    def n(self) -> int:
        """Number of sensors."""
        return len(self.ids)

    @cached_property
    def fingerprint(self) -> bytes:
        """Digest of ids and distances that identifies the sensor set."""
        h = hashlib.blake2b(digest_size=16)
        h.update("\x1f".join(self.ids).encode())
        h.update(np.ascontiguousarray(self.dist).tobytes())
        return h.digest()

    def index_of(self, ids: Iterable[str]) -> List[int]:
        """Map sensor ids to row indices (raises on unknown ids)."""
        lookup: Dict[str, int] = {sid: i for i, sid in enumerate(self.ids)}
        try:
            return [lookup[str(sid)] for sid in ids]
        except KeyError as e:
            raise GraphError(f"Unknown sensor id: {e.args[0]}") from e

    def subset(self, indices: Sequence[int]) -> "SensorSet":
        """Return the sensor set restricted to the given nodes, in that order."""
        idx = np.asarray(indices, dtype=int)
        return SensorSet(
            ids=tuple(self.ids[i] for i in idx),
            dist=self.dist[np.ix_(idx, idx)],
            coords=None if self.coords is None else self.coords[idx],
            metric=self.metric,
        )

    @classmethod
    def from_distance_matrix(
        cls, dist: np.ndarray, ids: Optional[Sequence[str]] = None
    ) -> "SensorSet":
        """Create a sensor set from a precomputed distance matrix."""
        dist = np.asarray(dist, dtype=np.float64)
        if dist.ndim != 2:
            raise GraphError("Distance matrix must be two-dimensional.")
        ids = ids if ids is not None else [str(i) for i in range(dist.shape[0])]
        return cls(ids=tuple(ids), dist=dist, metric=Metric.precomputed)


def build_distance_matrix(
    coords,
    metric: Metric = Metric.euclidean,
    ids: Optional[Sequence[str]] = None,
) -> SensorSet:
    """Compute all pairwise distances of the given sensor positions.

    Args:
        coords: n x 2 positions; (latitude, longitude) in degrees for haversine.
        metric: `euclidean` or `haversine` (kilometers, Earth radius 6371 km).
        ids: optional sensor ids (defaults to "0", "1", ...).

    Raises:
        GraphError: for fewer than 2 sensors or if all positions coincide.

    """
    metric = Metric(metric)
    if metric not in _METRICS:
        raise GraphError(f"Cannot compute distances for metric '{metric.value}'.")
    coords = np.asarray(coords, dtype=np.float64)
    if coords.ndim != 2 or coords.shape[1] != 2:
        raise GraphError(f"Coordinates must have shape (n, 2), got {coords.shape}.")
    if coords.shape[0] < 2:
        raise GraphError(f"At least 2 sensors are required, got {coords.shape[0]}.")

    dist = _METRICS[metric](coords)
    np.fill_diagonal(dist, 0.0)
    ids = ids if ids is not None else [str(i) for i in range(coords.shape[0])]
    logger.debug(f"Built {metric.value} distance matrix for {len(ids)} sensors.")
    return SensorSet(ids=tuple(ids), dist=dist, coords=coords, metric=metric)
