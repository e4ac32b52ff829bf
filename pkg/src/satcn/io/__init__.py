"""Reading and writing satcn files, and synthetic datasets."""

from .csv_util import FLOAT_FORMAT, read_meta, write_csv
from .panel_csv import panel_frame, read_panel_csv, write_panel_csv
from .sensor_csv import read_id_list, read_sensor_csv, write_sensor_csv
from .synthetic import generate_synthetic

__all__ = [
    "FLOAT_FORMAT",
    "generate_synthetic",
    "panel_frame",
    "read_id_list",
    "read_meta",
    "read_panel_csv",
    "read_sensor_csv",
    "write_csv",
    "write_panel_csv",
    "write_sensor_csv",
]
