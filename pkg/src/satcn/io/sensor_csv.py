"""Sensor CSV files.

The layout is recognized by the header:

- `id,x,y`: planar coordinates (euclidean distances),
- `id,lat,lon`: degrees (haversine distances in km),
- `id,<id_1>,...,<id_n>`: a full distance matrix, one row per sensor,
- `<id_1>,...,<id_n>`: the same matrix without the id column.
"""

import logging
from pathlib import Path
from typing import List, Mapping, Optional

import numpy as np
import pandas as pd

from satcn.core.errors import CsvFormatError, GraphError
from satcn.core.types import Metric
from satcn.graph import SensorSet, build_distance_matrix

from .csv_util import PathLike, read_table, write_csv

logger = logging.getLogger("satcn")

_PLANAR = (["x", "y"], Metric.euclidean)
_GEO = (["lat", "lon"], Metric.haversine)
_GEO_LONG = (["latitude", "longitude"], Metric.haversine)


def _all_numeric(body: pd.DataFrame) -> bool:
    cells = pd.to_numeric(body.stack().str.strip(), errors="coerce")
    return bool(np.isfinite(cells.to_numpy(dtype=np.float64)).all())


def _numbers(body: pd.DataFrame, names: List[str], path, first_line: int):
    out = np.empty(body.shape, dtype=np.float64)
    for j in range(body.shape[1]):
        cells = body.iloc[:, j].str.strip()
        try:
            col = cells.to_numpy(dtype=str).astype(np.float64)
        except ValueError:
            col = pd.to_numeric(cells, errors="coerce").to_numpy()
        bad = ~np.isfinite(col)
        if bad.any():
            row = int(np.flatnonzero(bad)[0])
            raise CsvFormatError(
                f"Invalid number '{body.iloc[row, j]}'.",
                path=path,
                line=first_line + row,
                column=names[j],
            )
        out[:, j] = col
    return out


def read_sensor_csv(path: PathLike, metric: Optional[Metric] = None) -> SensorSet:
    """Read sensors from a coordinate or distance matrix CSV.

    Args:
        path: CSV file
        metric: metric for coordinate files (default: from the header, `x,y`
            is euclidean and `lat,lon` haversine)

    Raises:
        CsvFormatError: on malformed content.
        GraphError: on degenerate geometry (e.g. fewer than 2 sensors).

    """
    df, _, skip = read_table(path)
    header = [h.strip() for h in df.iloc[0]]
    body = df.iloc[1:].reset_index(drop=True)
    ids = [str(i).strip() for i in body.iloc[:, 0]]
    first_line = skip + 2
    cols = [h.lower() for h in header[1:]]

    for names, default_metric in (_PLANAR, _GEO, _GEO_LONG):
        if cols == names:
            coords = _numbers(body.iloc[:, 1:], header[1:], path, first_line)
            use = Metric(metric) if metric is not None else default_metric
            if use == Metric.precomputed:
                raise CsvFormatError(
                    "Coordinate file needs a euclidean or haversine metric.",
                    path=path,
                )
            s = build_distance_matrix(coords, use, ids=ids)
            logger.debug(f"Read {s.n} sensor positions ({use.value}) from {path}.")
            return s

    if header[1:] == ids and ids:
        dist = _numbers(body.iloc[:, 1:], header[1:], path, first_line)
        return _distance_matrix(dist, ids, path)
    # bare matrix: the header holds the ids, the rows follow in the same order
    if len(header) == len(body) == body.shape[1] and _all_numeric(body):
        dist = _numbers(body, header, path, first_line)
        return _distance_matrix(dist, header, path)

    raise CsvFormatError(
        "Header must be 'id,x,y', 'id,lat,lon' or the ids of all rows, with or "
        f"without a leading 'id' (distance matrix), got {','.join(header)}.",
        path=path,
        line=skip + 1,
    )


def _distance_matrix(dist: np.ndarray, ids: List[str], path) -> SensorSet:
    try:
        s = SensorSet.from_distance_matrix(dist, ids=ids)
    except GraphError as e:
        raise GraphError(f"{path}: {e}") from e
    logger.debug(f"Read {s.n}x{s.n} distance matrix from {path}.")
    return s


def write_sensor_csv(
    s: SensorSet, path: PathLike, meta: Optional[Mapping[str, object]] = None
) -> Path:
    """Write coordinates if known, otherwise the distance matrix."""
    if s.coords is not None and s.metric != Metric.precomputed:
        names = _PLANAR[0] if s.metric == Metric.euclidean else _GEO[0]
        df = pd.DataFrame(s.coords, columns=names)
    else:
        df = pd.DataFrame(s.dist, columns=list(s.ids))
    df.insert(0, "id", list(s.ids))
    return write_csv(df, path, meta)


def read_id_list(path: PathLike) -> List[str]:
    """Read sensor ids, one per line (an optional `id` header is skipped).

    Comment lines starting with `#` and blank lines are ignored, so an empty
    file is an empty list.
    """
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as e:
        raise CsvFormatError(f"Cannot read file: {e}", path=path) from e
    ids = [ln.split(",")[0].strip() for ln in lines]
    ids = [i for i in ids if i and not i.startswith("#")]
    if ids and ids[0].lower() == "id":
        ids = ids[1:]
    return ids
