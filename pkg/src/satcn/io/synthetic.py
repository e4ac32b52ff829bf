"""Smooth synthetic spatiotemporal fields with known ground truth."""

import logging
from typing import Tuple

import numpy as np

from satcn.core.errors import DataError
from satcn.core.models import SyntheticFieldSpec
from satcn.core.types import Metric
from satcn.graph import SensorSet, build_distance_matrix
from satcn.sampling import TimeSeriesPanel

logger = logging.getLogger("satcn")


def generate_synthetic(
    spec: SyntheticFieldSpec,
) -> Tuple[SensorSet, TimeSeriesPanel, TimeSeriesPanel]:
    """Sample a random field at random positions in the unit square.

    The signal is `sum_b phi_b(x) * psi_b(t)` where `phi_b` is a Gaussian
    bump of width `length_scale` around a random center and `psi_b` a
    sinusoid with random amplitude and phase. Frequencies are taken from
    `spec.frequencies` in turn.

    Returns:
        sensors, noisy panel and the noiseless ground truth

    """
    rng = np.random.default_rng(spec.seed)
    coords = rng.uniform(0.0, 1.0, size=(spec.n, 2))
    centers = rng.uniform(0.0, 1.0, size=(spec.n_basis, 2))
    amps = rng.uniform(0.5, 1.5, size=spec.n_basis)
    phases = rng.uniform(0.0, 2 * np.pi, size=spec.n_basis)
    freqs = np.array(
        [spec.frequencies[b % len(spec.frequencies)] for b in range(spec.n_basis)]
    )

    sq = np.sum((coords[:, None, :] - centers[None, :, :]) ** 2, axis=-1)
    phi = np.exp(-sq / (2.0 * spec.length_scale**2))  # n x n_basis
    t = np.arange(spec.T)
    psi = amps[:, None] * np.sin(2 * np.pi * freqs[:, None] * t + phases[:, None])
    truth = phi @ psi

    noise_std = spec.noise_std
    if spec.noise_relative:
        noise_std *= float(truth.std())
    values = truth + rng.normal(0.0, 1.0, size=truth.shape) * noise_std
    if not np.all(np.isfinite(values)):
        raise DataError("Synthetic field is not finite, check the synthetic settings.")

    ids = [f"s{i}" for i in range(spec.n)]
    s = build_distance_matrix(coords, Metric.euclidean, ids=ids)
    logger.verbose(
        f"Generated synthetic field: {spec.n} sensors x {spec.T} steps, "
        f"{spec.n_basis} basis functions, noise std {noise_std:.4g}."
    )
    return (
        s,
        TimeSeriesPanel.from_array(values, ids=ids),
        TimeSeriesPanel.from_array(truth, ids=ids),
    )
