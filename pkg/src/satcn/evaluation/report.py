"""Metric tables as CSV, rich console tables and markdown reports."""

import logging
from pathlib import Path
from typing import Mapping, Optional, Sequence

import pandas as pd
from jinja2 import Environment, PackageLoader, select_autoescape
from pydantic import BaseModel
from rich.table import Table

from satcn.io import write_csv

from .metrics import MetricReport

logger = logging.getLogger("satcn")

COLUMNS = ["method", "k", "rmse", "mae", "count"]


class ScoredMethod(BaseModel):
    """Metrics of one estimation method (`k` is set for the kNN baseline)."""

    method: str
    k: Optional[int] = None
    report: MetricReport


def metric_frame(rows: Sequence[ScoredMethod]) -> pd.DataFrame:
    """Return one row per method with the columns of `COLUMNS`."""
    records = [
        {"method": r.method, "k": r.k, **r.report.model_dump()} for r in rows
    ]
    df = pd.DataFrame.from_records(records, columns=COLUMNS)
    return df.astype({"k": "Int64"})


def best_row(df: pd.DataFrame) -> Optional[pd.Series]:
    """Return the row with the lowest MAE (first one on ties)."""
    if df.empty:
        return None
    return df.loc[df["mae"].idxmin()]


def metric_table(df: pd.DataFrame, title: str = "Metrics") -> Table:
    """Build a rich table of a metric frame, best MAE highlighted."""
    table = Table(title=title)
    table.add_column("method")
    table.add_column("K", justify="right")
    table.add_column("RMSE", justify="right")
    table.add_column("MAE", justify="right")
    table.add_column("cells", justify="right")
    best = best_row(df)
    for idx, row in df.iterrows():
        style = "bold green" if best is not None and idx == best.name else None
        table.add_row(
            str(row["method"]),
            "" if pd.isna(row["k"]) else str(int(row["k"])),
            f"{row['rmse']:.6f}",
            f"{row['mae']:.6f}",
            str(int(row["count"])),
            style=style,
        )
    return table


def _env() -> Environment:
    return Environment(
        loader=PackageLoader("satcn", "templates"),
        autoescape=select_autoescape(),
        keep_trailing_newline=True,
    )


def render_markdown(
    df: pd.DataFrame,
    title: str = "satcn evaluation",
    meta: Optional[Mapping[str, object]] = None,
) -> str:
    """Render a metric frame as a markdown report."""
    rows = [
        {
            "method": r["method"],
            "k": None if pd.isna(r["k"]) else int(r["k"]),
            "rmse": float(r["rmse"]),
            "mae": float(r["mae"]),
            "count": int(r["count"]),
        }
        for _, r in df.iterrows()
    ]
    best = min(rows, key=lambda r: r["mae"]) if rows else None
    return (
        _env()
        .get_template("report.md.j2")
        .render(title=title, meta=dict(meta or {}), rows=rows, best=best)
    )


def write_metric_report(
    df: pd.DataFrame,
    out_dir: Path,
    meta: Optional[Mapping[str, object]] = None,
    *,
    title: str = "satcn evaluation",
) -> Sequence[Path]:
    """Write `metrics.csv` and `report.md` to `out_dir`."""
    out_dir = Path(out_dir)
    csv_path = write_csv(df, out_dir / "metrics.csv", meta)
    md_path = out_dir / "report.md"
    md_path.write_text(render_markdown(df, title, meta), encoding="utf-8")
    logger.verbose(f"Wrote {md_path}")
    return [csv_path, md_path]
