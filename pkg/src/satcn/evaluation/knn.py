"""k-nearest-neighbor interpolation baseline."""

import logging
from typing import Iterable

import numpy as np

from satcn.core.errors import ConfigError, DataError
from satcn.graph import SensorSet
from satcn.sampling import TimeSeriesPanel

logger = logging.getLogger("satcn")


def knn_interpolate(
    observed: TimeSeriesPanel, s: SensorSet, unknown: Iterable[str], k: int
) -> np.ndarray:
    """Average the `k` nearest observed sensors at every time step.

    Only sensors with an observation at a step take part in that step. Ties
    in distance go to the sensor with the lower index in `s`, and with fewer
    than `k` available sensors all of them are used.

    Returns:
        n_unknown x T estimates, rows in the order of `unknown`

    Raises:
        ConfigError: if `k < 1`.
        DataError: if no observed sensor is available at some step.

    """
    if int(k) < 1:
        raise ConfigError(f"K must be >= 1, got {k}.")
    unknown = [str(i) for i in unknown]
    if not unknown:
        return np.zeros((0, observed.T))
    obs_idx = np.asarray(s.index_of(observed.ids))
    unk_idx = np.asarray(s.index_of(unknown))

    by_index = np.argsort(obs_idx, kind="stable")
    dist = s.dist[np.ix_(unk_idx, obs_idx[by_index])]
    # n_unknown x n_obs rows of the observed panel, nearest first
    order = by_index[np.argsort(dist, axis=1, kind="stable")]

    avail = observed.obs_mask[order]  # n_unknown x n_obs x T
    used = avail & (np.cumsum(avail, axis=1) <= k)
    counts = used.sum(axis=1)
    if np.any(counts == 0):
        step = int(np.flatnonzero(counts.min(axis=0) == 0)[0])
        raise DataError(
            f"No observed sensor is available at step {step} "
            f"('{observed.timestamps[step]}')."
        )
    sums = np.where(used, observed.values[order], 0.0).sum(axis=1)
    logger.debug(f"kNN (K={k}) for {len(unknown)} sensors over {observed.T} steps.")
    return sums / counts
