"""Training loop: Adam on the masked batch MAE with sensor-level validation."""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np
import pandas as pd

from satcn.aggregation import compute_deg
from satcn.autodiff import ops
from satcn.autodiff.tape import Tape
from satcn.core.errors import NumericalError, SamplingError
from satcn.core.models import ArchConfig, TrainConfig
from satcn.graph import NeighborGraph, SensorSet, build_full_adjacency
from satcn.sampling import Normalization, TimeSeriesPanel, generate_training_batch

from .krige import krige
from .satcn import SatcnModel, forward_var, init_model

logger = logging.getLogger("satcn")

GRAPH_CACHE_SIZE: int = 20000
"""Number of masked graphs kept between iterations."""


class Adam:
    """Adam optimizer over a dict of numpy parameter tensors."""

    def __init__(
        self,
        lr: float = 1e-3,
        beta1: float = 0.9,
        beta2: float = 0.999,
        eps: float = 1e-8,
    ):
        """Create an optimizer without state."""
        self.lr = lr
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.t = 0
        self._m: Dict[str, np.ndarray] = {}
        self._v: Dict[str, np.ndarray] = {}

    def step(
        self, params: Dict[str, np.ndarray], grads: Dict[str, np.ndarray]
    ) -> Dict[str, np.ndarray]:
        """Return the parameters after one bias-corrected update."""
        self.t += 1
        bc1 = 1.0 - self.beta1**self.t
        bc2 = 1.0 - self.beta2**self.t
        out = {}
        for name, p in params.items():
            g = grads[name]
            m = self._m.get(name, np.zeros_like(p))
            v = self._v.get(name, np.zeros_like(p))
            m = self.beta1 * m + (1.0 - self.beta1) * g
            v = self.beta2 * v + (1.0 - self.beta2) * g * g
            self._m[name], self._v[name] = m, v
            out[name] = p - self.lr * (m / bc1) / (np.sqrt(v / bc2) + self.eps)
        return out


@dataclass
class TrainingHistory:
    """Training losses (normalized units) and validation MAE (original units)."""

    train_loss: List[Tuple[int, float]] = field(default_factory=list)
    val_mae: List[Tuple[int, float]] = field(default_factory=list)
    best_iteration: Optional[int] = None
    stopped_early: bool = False

    def __len__(self) -> int:
        """Return the number of recorded iterations."""
        return len(self.train_loss)

    def to_frame(self) -> pd.DataFrame:
        """Return one row per iteration (val_mae is NaN between validations)."""
        df = pd.DataFrame(self.train_loss, columns=["iteration", "train_loss"])
        val = pd.DataFrame(self.val_mae, columns=["iteration", "val_mae"])
        return df.merge(val, on="iteration", how="left")


@dataclass
class _Validation:
    """Held-out sensors and the window they are evaluated on."""

    sensors: SensorSet
    observed: TimeSeriesPanel
    unknown: List[str]
    truth: np.ndarray
    mask: np.ndarray

    def mae(self, m: SatcnModel) -> float:
        """Return the MAE of the held-out sensors in original units."""
        est = krige(m, self.observed, self.sensors, self.unknown)
        return float(np.mean(np.abs(est - self.truth)[self.mask]))


def _split_validation(
    n: int, cfg: TrainConfig, rng: np.random.Generator
) -> Tuple[np.ndarray, np.ndarray]:
    n_val = int(np.floor(cfg.val_fraction * n))
    if n - n_val < 2:
        n_val = max(0, n - 2)
    val_idx = np.sort(rng.choice(n, size=n_val, replace=False))
    train_idx = np.setdiff1d(np.arange(n), val_idx)
    return train_idx, val_idx


def _make_validation(
    panel: TimeSeriesPanel,
    s: SensorSet,
    train_idx: np.ndarray,
    val_idx: np.ndarray,
    cfg: TrainConfig,
    u: int,
) -> Optional[_Validation]:
    if val_idx.size == 0:
        return None
    width = min(cfg.val_window, panel.T)
    if width <= u:
        return None
    window = panel.window(panel.T - width, panel.T)
    target = window.rows(val_idx)
    mask = target.obs_mask[:, u:]
    if not mask.any():
        logger.verbose("No observed validation cells, validation is disabled.")
        return None
    return _Validation(
        sensors=s,
        observed=window.rows(train_idx),
        unknown=list(target.ids),
        truth=target.values[:, u:],
        mask=mask,
    )


def train(
    panel: TimeSeriesPanel,
    s: SensorSet,
    cfg: TrainConfig,
    arch: ArchConfig,
    *,
    config_hash: str = "",
) -> Tuple[SatcnModel, TrainingHistory]:
    """Train a SATCN model on the sensors of `s`.

    A fraction of the sensors is held out and estimated from the others every
    `val_every` iterations. The returned model has the parameters with the
    lowest validation MAE (the last ones if there is no validation).

    Args:
        panel: training signals, one row per sensor of `s`
        s: training sensors
        cfg: optimizer and schedule
        arch: architecture
        config_hash: hash stored in the returned model

    Raises:
        SamplingError: if the panel is too short or has too few sensors.
        NumericalError: if the loss or a gradient becomes non-finite.

    """
    if panel.n != s.n:
        raise SamplingError(f"Panel has {panel.n} sensors, sensor set has {s.n}.")
    rng = np.random.default_rng(cfg.seed)
    train_idx, val_idx = _split_validation(s.n, cfg, rng)
    train_s = s.subset(train_idx)
    train_panel = panel.rows(train_idx)

    norm = Normalization.fit(train_panel.values, train_panel.obs_mask)
    a_hat = build_full_adjacency(train_s, arch.k)
    deg = compute_deg(a_hat)
    model = init_model(
        arch,
        deg,
        norm,
        rng,
        d_max=train_s.d_max,
        seed=cfg.seed,
        config_hash=config_hash,
    )
    history = TrainingHistory()
    logger.info(
        f"Training on {train_s.n} sensors ({val_idx.size} held out for validation), "
        f"{panel.T} steps, {model.num_parameters()} parameters, deg = {deg:.4f}."
    )
    if cfg.iterations == 0:
        return model, history

    validation = _make_validation(panel, s, train_idx, val_idx, cfg, arch.u)
    n_m = arch.masked_count(train_s.n)
    optimizer = Adam(cfg.learning_rate, cfg.beta1, cfg.beta2, cfg.adam_epsilon)
    cache: Dict[bytes, NeighborGraph] = {}
    params = model.params
    best_params, best_mae, stale = None, np.inf, 0

    for it in range(1, cfg.iterations + 1):
        if len(cache) > GRAPH_CACHE_SIZE:
            cache.clear()
        batch = generate_training_batch(
            train_panel,
            train_s,
            arch.h,
            arch.u,
            arch.k,
            n_m,
            cfg.batch_size,
            rng,
            norm=norm,
            eval_masked_only=cfg.loss_on_masked_only,
            a_hat=a_hat,
            graph_cache=cache,
        )
        masks = batch.eval_masks()
        if masks.any():
            loss_value, grads = _loss_and_grads(params, arch, deg, batch, a_hat)
            if not np.isfinite(loss_value) or not all(
                np.all(np.isfinite(g)) for g in grads.values()
            ):
                raise NumericalError(
                    f"Non-finite training loss or gradient at iteration {it} "
                    f"(loss = {loss_value}, samples start at "
                    f"{[smp.start for smp in batch.samples]})."
                )
            params = optimizer.step(params, grads)
            history.train_loss.append((it, loss_value))
        else:
            logger.debug(f"Iteration {it}: no evaluated cell, skipping update.")

        if it % cfg.log_every == 0 and history.train_loss:
            logger.info(f"Iteration {it}: loss = {history.train_loss[-1][1]:.6f}")

        if validation is not None and (it % cfg.val_every == 0 or it == cfg.iterations):
            mae = validation.mae(model.with_params(params))
            history.val_mae.append((it, mae))
            logger.verbose(f"Iteration {it}: validation MAE = {mae:.6f}")
            if mae < best_mae:
                best_params, best_mae, stale = params, mae, 0
                history.best_iteration = it
            else:
                stale += 1
                if cfg.patience and stale >= cfg.patience:
                    logger.info(
                        f"Stopping early at iteration {it}, best validation MAE "
                        f"{best_mae:.6f} at iteration {history.best_iteration}."
                    )
                    history.stopped_early = True
                    break

    return model.with_params(best_params if best_params is not None else params), history


def _loss_and_grads(params, arch, deg, batch, a_hat: NeighborGraph):
    tape = Tape()
    tracked = {name: tape.parameter(name, value) for name, value in params.items()}
    pred = forward_var(
        tracked,
        arch,
        deg,
        batch.inputs(),
        [smp.a for smp in batch.samples],
        a_hat,
    )
    loss = ops.masked_mean_abs(pred, batch.targets(), batch.eval_masks())
    return float(loss.value), tape.backward(loss)
