"""Kriging inference on arbitrary sensor sets."""

import logging
from typing import Iterable, Optional

import numpy as np

from satcn.core.errors import DataError
from satcn.graph import SensorSet, build_full_adjacency, build_time_varying_sequence
from satcn.sampling import TimeSeriesPanel

from .satcn import CHUNK_STEPS, SatcnModel, predict_normalized

logger = logging.getLogger("satcn")


def krige(
    m: SatcnModel,
    observed: TimeSeriesPanel,
    all_sensors: SensorSet,
    unknown: Iterable[str],
    *,
    chunk_steps: Optional[int] = None,
) -> np.ndarray:
    """Estimate the signals of unknown sensors from the observed ones.

    The graphs are built over the observed and unknown sensors only, with
    edge weights scaled by the training `d_max` of the model. Unknown
    sensors and unobserved cells are masked, so estimates do not depend on
    any value at those cells. Sensors of `all_sensors` that are neither
    observed nor unknown are ignored.

    Args:
        m: trained model
        observed: panel of the observed sensors (ids must be in `all_sensors`)
        all_sensors: sensor set with the positions of all involved sensors
        unknown: ids of the sensors to estimate
        chunk_steps: output steps per forward pass

    Returns:
        n_unknown x (T_in - u) estimates in original units, rows in the order
        of `unknown`

    Raises:
        DataError: if unknown and observed sensors overlap, if the panel is not
            longer than u, or the sensor geometry is degenerate.

    """
    unknown = [str(i) for i in unknown]
    if observed.T <= m.u:
        raise DataError(
            f"Observed panel has {observed.T} steps, more than u = {m.u} are required."
        )
    overlap = sorted(set(unknown) & set(observed.ids))
    if overlap:
        raise DataError(f"Sensors are both observed and unknown: {overlap}")
    if len(set(unknown)) != len(unknown):
        raise DataError("Unknown sensor ids must be unique.")
    t_out = observed.T - m.u
    if not unknown:
        return np.zeros((0, t_out))

    obs_idx = all_sensors.index_of(observed.ids)
    unk_idx = all_sensors.index_of(unknown)
    sub = all_sensors.subset(obs_idx + unk_idx)
    n_obs, n_unk = len(obs_idx), len(unk_idx)

    x = np.zeros((sub.n, observed.T))
    x[:n_obs] = observed.normalized_values(m.norm)
    avail = np.zeros((sub.n, observed.T), dtype=bool)
    avail[:n_obs] = observed.obs_mask

    a = build_time_varying_sequence(sub, m.arch.k, avail, d_max=m.weight_scale)
    a_hat = build_full_adjacency(sub, m.arch.k, d_max=m.weight_scale)
    logger.debug(
        f"Kriging {n_unk} sensors from {n_obs} observed over {observed.T} steps."
    )
    out = predict_normalized(
        m, x, a, a_hat, chunk_steps=chunk_steps or CHUNK_STEPS
    )
    return m.norm.invert(out[n_obs:])
