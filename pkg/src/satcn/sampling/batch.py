"""Random training samples with simulated unknown sensors.

Each sample takes a random window of `h + u` steps, hides `n_m` random
sensors by zeroing their rows, and pairs the window with the masked graphs
(one per column, masking the hidden sensors and every sensor without an
observation in that column) and the full graph. The target is the last `h`
columns of the window, evaluated only where the panel has observations.
"""

import logging
from dataclasses import dataclass
from typing import Dict, FrozenSet, Optional, Tuple

import numpy as np

from satcn.core.errors import SamplingError
from satcn.graph import (
    NeighborGraph,
    SensorSet,
    build_full_adjacency,
    build_time_varying_sequence,
)

from .panel import Normalization, TimeSeriesPanel

logger = logging.getLogger("satcn")


@dataclass(frozen=True, eq=False)
class TrainingSample:
    """One training sample.

    Attributes:
        x: n x (h + u) input with masked rows and unobserved cells set to 0
        target: n x h values of the last h window columns
        a: masked graph of each input column
        a_hat: full graph
        omega: simulated unknown sensors
        eval_mask: n x h cells with observed ground truth
        start: first column of the window in the panel

    """

    x: np.ndarray
    target: np.ndarray
    a: Tuple[NeighborGraph, ...]
    a_hat: NeighborGraph
    omega: FrozenSet[int]
    eval_mask: np.ndarray
    start: int


@dataclass(frozen=True, eq=False)
class TrainingBatch:
    """A list of samples sharing the window length `h` and reduction `u`."""

    samples: Tuple[TrainingSample, ...]
    h: int
    u: int

    def __len__(self) -> int:
        """Return the number of samples."""
        return len(self.samples)

    def inputs(self) -> np.ndarray:
        """Return the stacked inputs, S x n x (h + u)."""
        return np.stack([s.x for s in self.samples])

    def targets(self) -> np.ndarray:
        """Return the stacked targets, S x n x h."""
        return np.stack([s.target for s in self.samples])

    def eval_masks(self) -> np.ndarray:
        """Return the stacked evaluation masks, S x n x h."""
        return np.stack([s.eval_mask for s in self.samples])


def window_starts(T: int, h: int, u: int) -> range:  # noqa: N803
    """Return all legal first columns of a window of `h + u` steps."""
    return range(0, T - h - u + 1)


def _check_args(panel: TimeSeriesPanel, s: SensorSet, h, u, n_m, batch_size):
    if panel.n != s.n:
        raise SamplingError(f"Panel has {panel.n} sensors, sensor set has {s.n}.")
    if h < 1:
        raise SamplingError(f"Window length h must be >= 1, got {h}.")
    if u < 0:
        raise SamplingError(f"Temporal reduction u must be >= 0, got {u}.")
    if batch_size < 1:
        raise SamplingError(f"Batch size must be >= 1, got {batch_size}.")
    if panel.T < h + u:
        raise SamplingError(
            f"Panel has {panel.T} steps, at least h + u = {h + u} are required."
        )
    if not 0 <= n_m < panel.n:
        raise SamplingError(
            f"Number of masked sensors n_m must be in [0, {panel.n - 1}], got {n_m}."
        )


def generate_training_batch(
    panel: TimeSeriesPanel,
    s: SensorSet,
    h: int,
    u: int,
    k: int,
    n_m: int,
    batch_size: int,
    rng: np.random.Generator,
    *,
    norm: Optional[Normalization] = None,
    eval_masked_only: bool = False,
    a_hat: Optional[NeighborGraph] = None,
    graph_cache: Optional[Dict[bytes, NeighborGraph]] = None,
) -> TrainingBatch:
    """Draw `batch_size` independent training samples.

    Args:
        panel: training signals of the sensors in `s`
        s: training sensors
        h: number of target steps
        u: temporal reduction of the network
        k: neighbor count of the graphs
        n_m: number of sensors hidden per sample
        batch_size: number of samples
        rng: random generator (the only source of randomness)
        norm: normalization applied to the inputs and targets (none if omitted)
        eval_masked_only: only evaluate the hidden sensors
        a_hat: precomputed full graph of `s`
        graph_cache: dict used to share masked graphs across calls

    Raises:
        SamplingError: if the panel is too short or `n_m >= n`.

    """
    _check_args(panel, s, h, u, n_m, batch_size)
    if a_hat is None:
        a_hat = build_full_adjacency(s, k)
    cache = {} if graph_cache is None else graph_cache
    values = panel.normalized_values(norm)
    starts = window_starts(panel.T, h, u)
    width = h + u

    samples = []
    for _ in range(batch_size):
        start = int(rng.integers(starts.start, starts.stop))
        omega = np.sort(rng.choice(panel.n, size=n_m, replace=False))

        obs = panel.obs_mask[:, start : start + width]
        x = np.where(obs, values[:, start : start + width], 0.0)
        x[omega, :] = 0.0
        target = values[:, start + u : start + width].copy()
        eval_mask = obs[:, u:].copy()
        if eval_masked_only:
            hidden = np.zeros(panel.n, dtype=bool)
            hidden[omega] = True
            eval_mask &= hidden[:, None]

        a = build_time_varying_sequence(s, k, obs, omega, cache=cache)
        samples.append(
            TrainingSample(
                x=x,
                target=target,
                a=a,
                a_hat=a_hat,
                omega=frozenset(int(i) for i in omega),
                eval_mask=eval_mask,
                start=start,
            )
        )

    logger.debug(
        f"Sampled {batch_size} windows (h={h}, u={u}, n_m={n_m}), "
        f"{len(cache)} distinct masked graphs cached."
    )
    return TrainingBatch(samples=tuple(samples), h=h, u=u)
