"""CSV helpers shared by all satcn file formats.

Every CSV written by satcn may start with comment lines of the form
`# key: value` that carry metadata like the config hash and the seed.
"""

import logging
from pathlib import Path
from typing import Dict, Mapping, Optional, Tuple, Union

import pandas as pd

from satcn.core.errors import CsvFormatError

logger = logging.getLogger("satcn")

FLOAT_FORMAT = "%.17g"
"""Float format that reproduces every float64 exactly."""

PathLike = Union[str, Path]


def read_meta(path: PathLike) -> Tuple[Dict[str, str], int]:
    """Return the leading `# key: value` lines and their count."""
    meta: Dict[str, str] = {}
    count = 0
    try:
        with open(path, "r", encoding="utf-8") as f:
            for line in f:
                if not line.startswith("#"):
                    break
                count += 1
                key, sep, value = line[1:].partition(":")
                if sep:
                    meta[key.strip()] = value.strip()
    except OSError as e:
        raise CsvFormatError(f"Cannot read file: {e}", path=path) from e
    return meta, count


def read_table(path: PathLike) -> Tuple[pd.DataFrame, Dict[str, str], int]:
    """Read a CSV as strings, without interpreting the header row.

    Returns:
        the table (row 0 is the header), the metadata and the number of
        comment lines before the header

    """
    meta, skip = read_meta(path)
    try:
        df = pd.read_csv(
            path,
            skiprows=skip,
            header=None,
            dtype=str,
            keep_default_na=False,
            skip_blank_lines=True,
        )
    except pd.errors.EmptyDataError as e:
        raise CsvFormatError("File has no header row.", path=path) from e
    except pd.errors.ParserError as e:
        raise CsvFormatError(str(e).strip(), path=path) from e
    return df.fillna(""), meta, skip


def write_csv(
    df: pd.DataFrame,
    path: PathLike,
    meta: Optional[Mapping[str, object]] = None,
    *,
    index: bool = False,
) -> Path:
    """Write a frame with metadata comment lines in front."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as f:
        for key, value in (meta or {}).items():
            f.write(f"# {key}: {value}\n")
        df.to_csv(f, index=index, float_format=FLOAT_FORMAT, na_rep="")
    logger.verbose(f"Wrote {path}")
    return path
