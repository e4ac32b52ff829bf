"""Finite difference check of the full SATCN loss."""

import logging
from typing import Optional

import numpy as np

from satcn.aggregation import compute_deg
from satcn.autodiff import GradCheckReport, finite_difference_check, ops
from satcn.core.errors import NumericalError
from satcn.core.models import ArchConfig
from satcn.graph import (
    build_distance_matrix,
    build_full_adjacency,
    build_time_varying_sequence,
)
from satcn.model import forward_var, init_model

logger = logging.getLogger("satcn")


def run_gradcheck(
    arch: ArchConfig,
    *,
    n: int = 6,
    h: int = 4,
    seed: int = 0,
    step: float = 1e-5,
    tolerance: float = 1e-4,
    max_coords: Optional[int] = None,
) -> GradCheckReport:
    """Check all parameter adjoints of `mae_loss(satcn_forward(...))`.

    The instance is random: `n` sensors in the unit square, one hidden
    sensor, about 20% unobserved cells and an input of `h + u` steps. Every
    coordinate of every tensor is checked unless `max_coords` limits the
    check to that many random coordinates per tensor.

    Raises:
        NumericalError: if some tensor exceeds the tolerance.

    """
    rng = np.random.default_rng(seed)
    u = arch.u
    s = build_distance_matrix(rng.uniform(size=(n, 2)))
    obs = rng.uniform(size=(n, h + u)) > 0.2
    omega = [int(rng.integers(n))]
    x = np.where(obs, rng.normal(size=(n, h + u)), 0.0)
    x[omega] = 0.0
    target = rng.normal(size=(n, h))
    mask = obs[:, u:]
    if not mask.any():
        mask = np.ones_like(mask)

    a = build_time_varying_sequence(s, arch.k, obs, omega)
    a_hat = build_full_adjacency(s, arch.k)
    deg = compute_deg(a_hat)
    model = init_model(arch, deg, rng=rng)
    # nonzero biases, relu is not differentiable at 0
    params = {
        name: value + (0.1 * rng.normal(size=value.shape) if "bias" in name else 0.0)
        for name, value in model.params.items()
    }

    def loss(tape, pvars):
        pred = forward_var(pvars, arch, deg, x[None], [a], a_hat)
        return ops.masked_mean_abs(pred, target[None], mask[None])

    report = finite_difference_check(
        loss, params, step, max_coords=max_coords, rng=rng
    )
    for name, err in report.errors.items():
        logger.info(f"{name}: {report.checked[name]} coords, max rel err {err:.3e}")
    if not report.passed(tolerance):
        raise NumericalError(
            f"Gradient check failed: max relative error {report.max_error:.3e} "
            f">= {tolerance:g}."
        )
    return report
