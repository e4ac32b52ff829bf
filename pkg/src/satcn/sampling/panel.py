"""Time series panels with explicit observation masks."""

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from satcn.core.errors import DataError


@dataclass(frozen=True)
class Normalization:
    """Z-score statistics of the observed training entries."""

    mean: float = 0.0
    std: float = 1.0

    @classmethod
    def fit(cls, values, obs_mask) -> "Normalization":
        """Estimate mean/std from observed entries (std falls back to 1)."""
        observed = np.asarray(values, dtype=np.float64)[np.asarray(obs_mask, bool)]
        if observed.size == 0:
            raise DataError("Cannot normalize a panel without observed entries.")
        mean = float(observed.mean())
        std = float(observed.std())
        if not np.isfinite(std) or std <= 0:
            std = 1.0
        return cls(mean=mean, std=std)

    def apply(self, values) -> np.ndarray:
        """Map values into normalized units."""
        return (np.asarray(values, dtype=np.float64) - self.mean) / self.std

    def invert(self, values) -> np.ndarray:
        """Map normalized values back into original units."""
        return np.asarray(values, dtype=np.float64) * self.std + self.mean


@dataclass(frozen=True, eq=False)
class TimeSeriesPanel:
    """An n x T signal matrix with a boolean observation mask.

    Values at unobserved cells are meaningless and are replaced by 0 on
    construction. `ids` names the sensor of each row and `timestamps` label
    the columns; only the column order defines time ordering.
    """

    values: np.ndarray
    obs_mask: np.ndarray
    ids: Tuple[str, ...] = ()
    timestamps: Tuple[str, ...] = ()
    meta: str = ""

    def __post_init__(self):
        """Validate shapes and fill in default ids/timestamps."""
        values = np.array(self.values, dtype=np.float64)
        mask = np.array(self.obs_mask, dtype=bool)
        if values.ndim != 2:
            raise DataError(f"Panel values must be n x T, got shape {values.shape}.")
        if mask.shape != values.shape:
            raise DataError("Observation mask must have the same shape as the values.")
        n, t = values.shape
        if n < 1 or t < 1:
            raise DataError(f"Panel must have at least one row and column, got {n}x{t}.")
        if not np.all(np.isfinite(values[mask])):
            raise DataError("Observed panel entries must be finite.")
        values[~mask] = 0.0
        values.setflags(write=False)
        mask.setflags(write=False)

        ids = tuple(str(i) for i in self.ids) or tuple(str(i) for i in range(n))
        stamps = tuple(str(s) for s in self.timestamps) or tuple(
            str(i) for i in range(t)
        )
        if len(ids) != n or len(set(ids)) != n:
            raise DataError(f"Panel needs {n} unique sensor ids, got {len(ids)}.")
        if len(stamps) != t:
            raise DataError(f"Panel needs {t} timestamps, got {len(stamps)}.")

        object.__setattr__(self, "values", values)
        object.__setattr__(self, "obs_mask", mask)
        object.__setattr__(self, "ids", ids)
        object.__setattr__(self, "timestamps", stamps)

    @property
    def n(self) -> int:
        """Number of sensors (rows)."""
        return self.values.shape[0]

    @property
    def T(self) -> int:  # noqa: N802
        """Number of time steps (columns)."""
        return self.values.shape[1]

    @classmethod
    def from_array(cls, values, ids=None, timestamps=None, meta: str = ""):
        """Create a panel from an array where NaN marks unobserved cells."""
        values = np.asarray(values, dtype=np.float64)
        return cls(
            values=np.nan_to_num(values, nan=0.0),
            obs_mask=~np.isnan(values),
            ids=tuple(ids or ()),
            timestamps=tuple(timestamps or ()),
            meta=meta,
        )

    def to_array(self) -> np.ndarray:
        """Return the values with NaN at unobserved cells."""
        return np.where(self.obs_mask, self.values, np.nan)

    def rows(self, indices: Sequence[int]) -> "TimeSeriesPanel":
        """Return the panel restricted to the given rows, in that order."""
        idx = np.asarray(indices, dtype=int)
        return TimeSeriesPanel(
            values=self.values[idx],
            obs_mask=self.obs_mask[idx],
            ids=tuple(self.ids[i] for i in idx),
            timestamps=self.timestamps,
            meta=self.meta,
        )

    def window(self, start: int, stop: int) -> "TimeSeriesPanel":
        """Return the columns `start:stop`."""
        if not 0 <= start < stop <= self.T:
            raise DataError(f"Invalid window [{start}, {stop}) of {self.T} steps.")
        return TimeSeriesPanel(
            values=self.values[:, start:stop],
            obs_mask=self.obs_mask[:, start:stop],
            ids=self.ids,
            timestamps=self.timestamps[start:stop],
            meta=self.meta,
        )

    def with_missing(self, missing) -> "TimeSeriesPanel":
        """Return a copy where the cells marked in `missing` are unobserved."""
        missing = np.asarray(missing, dtype=bool)
        if missing.shape != self.values.shape:
            raise DataError("Missing mask must have the same shape as the panel.")
        return TimeSeriesPanel(
            values=self.values,
            obs_mask=self.obs_mask & ~missing,
            ids=self.ids,
            timestamps=self.timestamps,
            meta=self.meta,
        )

    def normalized_values(self, norm: Optional[Normalization]) -> np.ndarray:
        """Return normalized values with 0 at every unobserved cell."""
        vals = self.values if norm is None else norm.apply(self.values)
        return np.where(self.obs_mask, vals, 0.0)
