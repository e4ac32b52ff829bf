from pathlib import Path

import numpy as np
import pytest

from satcn.core.log import SatcnLogLevel, set_log_level
from satcn.core.models import ArchConfig
from satcn.graph import build_distance_matrix

TEST_DIR = Path(__file__).resolve().parent

TEST_DATA_DIR = TEST_DIR / "data"
"""Location of the test input data."""


@pytest.fixture(scope="session", autouse=True)
def init_satcn_logger():
    set_log_level(SatcnLogLevel.DEBUG)


@pytest.fixture
def rng() -> np.random.Generator:
    """Return a seeded random generator."""
    return np.random.default_rng(1234)


@pytest.fixture
def line3():
    """Three sensors at x = 0, 1, 2 (d_max = 2)."""
    return build_distance_matrix([[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]])


@pytest.fixture
def tiny_arch() -> ArchConfig:
    """A small architecture with two SAN/TCN blocks of width 2 (u = 2)."""
    return ArchConfig(k=3, channels=[3, 2], tcn_widths=[2, 2], h=3)


@pytest.fixture
def random_sensors():
    """Return a factory for random sensor sets in the unit square."""

    def _make(n: int, seed: int = 0):
        coords = np.random.default_rng(seed).uniform(size=(n, 2))
        return build_distance_matrix(coords)

    return _make


@pytest.fixture
def data_dir(tmp_path) -> Path:
    """Copy the test data files into a temporary folder and return it."""
    for f in TEST_DATA_DIR.iterdir():
        if f.is_file():
            (tmp_path / f.name).write_bytes(f.read_bytes())
    return tmp_path
