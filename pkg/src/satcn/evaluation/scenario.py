"""Train/test scenarios: sensor split, temporal split and injected missingness."""

import logging
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from satcn.core.errors import DataError
from satcn.core.models import ScenarioSpec
from satcn.graph import SensorSet
from satcn.sampling import TimeSeriesPanel

logger = logging.getLogger("satcn")


@dataclass(frozen=True, eq=False)
class Scenario:
    """One kriging experiment cut out of a panel.

    Attributes:
        train_panel: training sensors over the training steps (with injected
            missing cells removed)
        train_sensors: training sensors
        test_observed: training sensors over the test steps
        test_truth: test sensors over the test steps
        test_ids: ids of the test sensors
        all_sensors: all sensors
        injected: cells of `train_panel` made unobserved

    """

    train_panel: TimeSeriesPanel
    train_sensors: SensorSet
    test_observed: TimeSeriesPanel
    test_truth: TimeSeriesPanel
    test_ids: Tuple[str, ...]
    all_sensors: SensorSet
    injected: np.ndarray

    @property
    def unknown(self) -> List[str]:
        """Ids of the test sensors."""
        return list(self.test_ids)


def make_scenario(panel: TimeSeriesPanel, s: SensorSet, spec: ScenarioSpec) -> Scenario:
    """Split a panel into training and test parts.

    `floor(space_frac * n)` sensors chosen uniformly at random (seeded) are
    used for training, the others are the test sensors. The first
    `floor(time_frac * T)` steps are the training period, the rest the test
    period. Then `floor(missing_ratio * count)` of the observed training cells
    are removed at random.

    Raises:
        DataError: if fewer than 2 training sensors, no test sensor, or an
            empty period results.

    """
    if panel.n != s.n or tuple(panel.ids) != tuple(s.ids):
        raise DataError("Panel rows must be the sensors of the sensor set, in order.")
    rng = np.random.default_rng(spec.seed)
    n_train = int(np.floor(spec.space_frac * s.n))
    if n_train < 2:
        raise DataError(
            f"Scenario leaves {n_train} training sensors, at least 2 are required."
        )
    if n_train >= s.n:
        raise DataError("Scenario leaves no test sensor.")
    t_split = int(np.floor(spec.time_frac * panel.T))
    if not 0 < t_split < panel.T:
        raise DataError(f"Scenario splits {panel.T} steps into an empty period.")

    train_idx = np.sort(rng.choice(s.n, size=n_train, replace=False))
    test_idx = np.setdiff1d(np.arange(s.n), train_idx)

    train_rows = panel.rows(train_idx)
    train_part = train_rows.window(0, t_split)
    cells = np.flatnonzero(train_part.obs_mask)
    n_missing = int(np.floor(spec.missing_ratio * cells.size))
    injected = np.zeros(train_part.obs_mask.shape, dtype=bool)
    if n_missing:
        injected.flat[rng.choice(cells, size=n_missing, replace=False)] = True

    logger.verbose(
        f"Scenario: {n_train} training / {test_idx.size} test sensors, "
        f"{t_split} / {panel.T - t_split} steps, {n_missing} cells removed."
    )
    return Scenario(
        train_panel=train_part.with_missing(injected),
        train_sensors=s.subset(train_idx),
        test_observed=train_rows.window(t_split, panel.T),
        test_truth=panel.rows(test_idx).window(t_split, panel.T),
        test_ids=tuple(s.ids[i] for i in test_idx),
        all_sensors=s,
        injected=injected,
    )
