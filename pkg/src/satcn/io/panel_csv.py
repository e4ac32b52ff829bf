"""Panel CSV files: a timestamp column and one column per sensor id.

Empty cells are unobserved. Timestamps are opaque labels, only the row order
defines the time order.
"""

import logging
from typing import Mapping, Optional

import numpy as np
import pandas as pd

from satcn.core.errors import CsvFormatError, DataError
from satcn.sampling import TimeSeriesPanel

from .csv_util import PathLike, read_table, write_csv

logger = logging.getLogger("satcn")

_MISSING = {"", "nan", "NaN", "NA"}


def _column_values(col: pd.Series, name: str, path, first_line: int) -> np.ndarray:
    cells = col.str.strip()
    missing = cells.isin(_MISSING)
    try:
        values = np.where(missing, "nan", cells).astype(np.float64)
    except ValueError:
        values = pd.to_numeric(cells.where(~missing), errors="coerce").to_numpy()
    bad = ~missing.to_numpy() & ~np.isfinite(values)
    if bad.any():
        row = int(np.flatnonzero(bad)[0])
        raise CsvFormatError(
            f"Invalid value '{cells.iloc[row]}'.",
            path=path,
            line=first_line + row,
            column=name,
        )
    return values


def read_panel_csv(path: PathLike) -> TimeSeriesPanel:
    """Read a panel CSV.

    The leading `# key: value` comment lines are kept in `panel.meta`.

    Raises:
        CsvFormatError: on malformed content, with line and column of the
            offending cell.

    """
    df, meta, skip = read_table(path)
    header = [h.strip() for h in df.iloc[0]]
    ids = header[1:]
    if not ids:
        raise CsvFormatError("No sensor columns.", path=path, line=skip + 1)
    dups = sorted({i for i in ids if ids.count(i) > 1})
    if dups or "" in ids:
        raise CsvFormatError(
            f"Sensor ids must be unique and non-empty, got duplicates {dups}.",
            path=path,
            line=skip + 1,
        )
    body = df.iloc[1:].reset_index(drop=True)
    if body.empty:
        raise CsvFormatError("Panel has no rows.", path=path, line=skip + 2)

    first_line = skip + 2
    columns = [
        _column_values(body.iloc[:, j + 1], ids[j], path, first_line)
        for j in range(len(ids))
    ]
    values = np.stack(columns)  # n x T
    meta_str = "\n".join(f"{k}: {v}" for k, v in meta.items())
    try:
        panel = TimeSeriesPanel.from_array(
            values,
            ids=ids,
            timestamps=[str(t).strip() for t in body.iloc[:, 0]],
            meta=meta_str,
        )
    except DataError as e:
        raise CsvFormatError(str(e), path=path) from e
    logger.debug(f"Read panel of {panel.n} sensors x {panel.T} steps from {path}.")
    return panel


def panel_frame(panel: TimeSeriesPanel) -> pd.DataFrame:
    """Return the panel as a frame (one row per step, NaN where unobserved)."""
    df = pd.DataFrame(panel.to_array().T, columns=list(panel.ids))
    df.insert(0, "timestamp", list(panel.timestamps))
    return df


def write_panel_csv(
    panel: TimeSeriesPanel,
    path: PathLike,
    meta: Optional[Mapping[str, object]] = None,
):
    """Write a panel CSV, unobserved cells are left empty."""
    return write_csv(panel_frame(panel), path, meta)
