"""Weighted k-nearest-neighbor sender graphs.

Both adjacency rules store, for every receiver node, the ordered list of
nodes that may send messages to it, weighted by `1 - dist / d_max`:

* the masked rule only draws senders from nodes outside the masked set,
* the full rule draws senders from all nodes.

Self edges are never stored, and zero weights are kept as explicit entries.

`d_max` defaults to the largest distance of the sensor set. A trained model
passes the `d_max` of its training sensors instead, and senders farther away
than that get weight 0.
"""

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, Optional, Tuple

import numpy as np

from satcn.core.errors import GraphError
from satcn.core.types import GraphKind

from .sensors import SensorSet

logger = logging.getLogger("satcn")

Neighborhood = Tuple[Tuple[int, float], ...]
"""Ordered (sender index, weight) pairs of one receiver."""


@dataclass(frozen=True)
class NeighborGraph:
    """Per-receiver weighted sender lists over `n` nodes."""

    n: int
    receivers: Tuple[Neighborhood, ...]
    k: int
    kind: GraphKind
    omega: FrozenSet[int] = frozenset()

    @cached_property
    def _edge_arrays(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        senders = [i for nbh in self.receivers for i, _ in nbh]
        weights = [w for nbh in self.receivers for _, w in nbh]
        recv = [j for j, nbh in enumerate(self.receivers) for _ in nbh]
        arrs = (
            np.asarray(senders, dtype=np.int64),
            np.asarray(recv, dtype=np.int64),
            np.asarray(weights, dtype=np.float64),
        )
        for a in arrs:
            a.setflags(write=False)
        return arrs

    def edges(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Return (senders, receivers, weights) arrays in receiver-major order."""
        return self._edge_arrays

    @cached_property
    def _counts(self) -> np.ndarray:
        counts = np.asarray([len(nbh) for nbh in self.receivers], dtype=np.int64)
        counts.setflags(write=False)
        return counts

    def counts(self) -> np.ndarray:
        """Return the number of senders of each receiver."""
        return self._counts

    @cached_property
    def _in_weight_sums(self) -> np.ndarray:
        sums = np.asarray(
            [sum(w for _, w in nbh) for nbh in self.receivers], dtype=np.float64
        )
        sums.setflags(write=False)
        return sums

    def in_weight_sums(self) -> np.ndarray:
        """Return the sum of incoming edge weights of each receiver."""
        return self._in_weight_sums

    @property
    def num_edges(self) -> int:
        """Total number of stored edges."""
        return int(self._counts.sum())

    def senders_of(self, j: int) -> Tuple[int, ...]:
        """Return the sender indices of receiver `j`."""
        return tuple(i for i, _ in self.receivers[j])

    @classmethod
    def empty(cls, n: int, k: int, kind: GraphKind, omega: Iterable[int] = ()):
        """Return a graph over `n` nodes without any edges."""
        return cls(n=n, receivers=((),) * n, k=k, kind=kind, omega=frozenset(omega))


def _check_k(k: int):
    if int(k) < 1:
        raise GraphError(f"Neighbor count k must be >= 1, got {k}.")


def _weight_scale(s: SensorSet, d_max: Optional[float]) -> float:
    if d_max is None:
        return s.d_max
    if not np.isfinite(d_max) or d_max <= 0:
        raise GraphError(f"d_max must be positive and finite, got {d_max}.")
    return float(d_max)


def _knn(
    s: SensorSet,
    k: int,
    omega: FrozenSet[int],
    kind: GraphKind,
    d_max: Optional[float] = None,
) -> NeighborGraph:
    """Build sender lists drawing only from nodes outside `omega`."""
    scale = _weight_scale(s, d_max)
    n = s.n
    d = np.array(s.dist, copy=True)
    if omega:
        d[:, sorted(omega)] = np.inf
    np.fill_diagonal(d, np.inf)
    # stable sort: equidistant senders stay in ascending index order
    order = np.argsort(d, axis=1, kind="stable")[:, :k]

    receivers = []
    for j in range(n):
        nbh = []
        for i in order[j]:
            dij = d[j, i]
            if not np.isfinite(dij):
                break
            nbh.append((int(i), max(0.0, float(1.0 - dij / scale))))
        receivers.append(tuple(nbh))
    return NeighborGraph(
        n=n, receivers=tuple(receivers), k=int(k), kind=kind, omega=omega
    )


def build_masked_adjacency(
    s: SensorSet, k: int, omega: Iterable[int] = (), *, d_max: Optional[float] = None
) -> NeighborGraph:
    """Build the masked k-NN graph where nodes in `omega` never send.

    Every node (masked or not) is a receiver; its senders are the up to `k`
    nearest unmasked nodes other than itself.

    Raises:
        GraphError: if `k < 1`, `omega` has invalid indices or covers all nodes.

    """
    _check_k(k)
    omega = frozenset(int(i) for i in omega)
    if any(i < 0 or i >= s.n for i in omega):
        raise GraphError(f"Masked set contains indices outside [0, {s.n}).")
    if len(omega) >= s.n:
        raise GraphError("All nodes are masked, no node is left to send messages.")
    return _knn(s, k, omega, GraphKind.masked, d_max)


def build_full_adjacency(
    s: SensorSet, k: int, *, d_max: Optional[float] = None
) -> NeighborGraph:
    """Build the full k-NN graph where every node may send."""
    _check_k(k)
    return _knn(s, k, frozenset(), GraphKind.full, d_max)


def build_time_varying_adjacency(
    s: SensorSet, k: int, obs_mask_t, *, d_max: Optional[float] = None
) -> NeighborGraph:
    """Build the masked graph for one time step from node availability.

    Nodes that are unavailable at this time step are masked.

    Raises:
        GraphError: if no node is available.

    """
    _check_k(k)
    avail = np.asarray(obs_mask_t, dtype=bool)
    if avail.shape != (s.n,):
        raise GraphError(f"Availability mask must have length {s.n}.")
    if not avail.any():
        raise GraphError("No node is available at this time step.")
    omega = frozenset(int(i) for i in np.flatnonzero(~avail))
    return _knn(s, k, omega, GraphKind.time_varying, d_max)


def build_time_varying_sequence(
    s: SensorSet,
    k: int,
    obs_mask,
    omega: Iterable[int] = (),
    *,
    cache: Optional[Dict[bytes, NeighborGraph]] = None,
    d_max: Optional[float] = None,
) -> Tuple[NeighborGraph, ...]:
    """Build one masked graph per time column.

    Column `t` masks `omega` together with the nodes unobserved at `t`.
    Columns with identical availability share one graph object, and a column
    where no node is available gets a graph without edges.

    Args:
        s: sensors of all nodes
        k: neighbor count
        obs_mask: n x T availability
        omega: nodes masked in every column
        cache: optional dict reused across calls to share graphs, also across
            sensor sets
        d_max: distance giving weight 0 (default: `s.d_max`)

    """
    _check_k(k)
    obs = np.asarray(obs_mask, dtype=bool)
    if obs.ndim != 2 or obs.shape[0] != s.n:
        raise GraphError(f"Availability mask must have shape ({s.n}, T).")
    avail = obs.copy()
    fixed = sorted(int(i) for i in omega)
    if fixed:
        avail[fixed, :] = False

    scale = _weight_scale(s, d_max)
    prefix = s.fingerprint + bytes(f":{int(k)}:{scale!r}:", "ascii")
    cache = {} if cache is None else cache
    graphs = []
    for t in range(avail.shape[1]):
        col = avail[:, t]
        key = prefix + np.packbits(col).tobytes()
        g = cache.get(key)
        if g is None:
            masked = frozenset(int(i) for i in np.flatnonzero(~col))
            if col.any():
                g = _knn(s, k, masked, GraphKind.time_varying, scale)
            else:
                g = NeighborGraph.empty(s.n, k, GraphKind.time_varying, masked)
            cache[key] = g
        graphs.append(g)
    return tuple(graphs)
