import logging

import pandas as pd
import pytest
from typer.testing import CliRunner

from satcn.core.log import SatcnLogLevel, set_log_level
from satcn.io import read_meta, read_panel_csv, write_panel_csv
from satcn.main import app

runner = CliRunner()
logger = logging.getLogger("satcn")


def test_app_version():
    result = runner.invoke(app, ["--version"])
    assert result.exit_code == 0
    assert "satcn version: " in result.stdout


def test_exclusive_log_flags():
    result = runner.invoke(app, ["-v", "-vv", "gradcheck"])
    assert result.exit_code == 1


@pytest.mark.parametrize("log_level", [lv for lv in SatcnLogLevel])
def test_log_levels(log_level):
    set_log_level(log_level)
    assert logger.getEffectiveLevel() == SatcnLogLevel.to_logging(log_level)

    print(f"testing log level {log_level}")
    logger.warning("warning")
    logger.warning({"some": "dict"})
    logger.info("info")
    logger.verbose("verbose")  # type: ignore
    logger.debug("debug")


@pytest.fixture
def trained(data_dir, monkeypatch):
    """Train a tiny model on the test panel and return its path."""
    monkeypatch.chdir(data_dir)
    model = data_dir / "out" / "model.satcn"
    result = runner.invoke(
        app,
        [
            "train",
            "-c",
            "satcn.toml",
            "-p",
            "panel.csv",
            "-s",
            "sensors.csv",
            "-o",
            "out",
            "-n",
            "2",
        ],
    )
    assert result.exit_code == 0, result.output
    return model


def test_train(trained):
    assert trained.is_file()
    history = trained.parent / "history.csv"
    assert read_meta(history)[0]["seed"] == "3"
    df = pd.read_csv(history, comment="#")
    assert df["iteration"].tolist() == [1, 2]


def test_krige(trained, data_dir):
    observed = read_panel_csv(data_dir / "panel.csv").rows([0, 1, 2, 3])
    write_panel_csv(observed, data_dir / "observed.csv")

    result = runner.invoke(
        app,
        [
            "krige",
            "-m",
            str(trained),
            "-p",
            "observed.csv",
            "-s",
            "sensors.csv",
            "-u",
            "unknown.txt",
            "-o",
            "est.csv",
        ],
    )
    assert result.exit_code == 0, result.output
    est = pd.read_csv(data_dir / "est.csv", comment="#")
    assert est.columns.tolist() == ["timestamp", "e", "f"]
    # the first u = 2 steps have no estimate
    assert est["timestamp"].tolist() == list(observed.timestamps[2:])
    assert est[["e", "f"]].notna().all().all()


def test_krige_nothing_unknown(trained, data_dir):
    result = runner.invoke(
        app,
        [
            "krige",
            "-m",
            str(trained),
            "-p",
            "panel.csv",
            "-s",
            "sensors.csv",
            "--ids",
            "",
            "-o",
            "est.csv",
        ],
    )
    assert result.exit_code == 0, result.output
    lines = (data_dir / "est.csv").read_text().splitlines()
    assert [ln for ln in lines if not ln.startswith("#")] == ["timestamp"]


def test_krige_errors(trained, data_dir):
    args = ["krige", "-m", str(trained), "-p", "panel.csv", "-s", "sensors.csv"]
    result = runner.invoke(
        app, args + ["-u", "unknown.txt", "--ids", "e", "-o", "est.csv"]
    )
    assert result.exit_code == 1
    # an unknown sensor that is also observed
    result = runner.invoke(app, args + ["--ids", "a", "-o", "est.csv"])
    assert result.exit_code == 3


def test_bad_panel(data_dir, monkeypatch):
    monkeypatch.chdir(data_dir)
    result = runner.invoke(
        app,
        ["train", "-c", "satcn.toml", "-p", "bad_panel.csv", "-s", "sensors.csv"],
    )
    assert result.exit_code == 3


def test_gradcheck(data_dir, monkeypatch):
    monkeypatch.chdir(data_dir)
    result = runner.invoke(
        app, ["gradcheck", "-c", "satcn.toml", "-n", "4", "-h", "3", "--max-coords", "8"]
    )
    assert result.exit_code == 0, result.output
    assert "gradcheck passed" in result.stdout
    # 8 from each larger tensor, all of the 21 bias and head coordinates
    assert "53 coordinates in 9 tensors" in result.stdout


def test_gradcheck_covers_all_coordinates(data_dir, monkeypatch):
    monkeypatch.chdir(data_dir)
    result = runner.invoke(app, ["gradcheck", "-c", "satcn.toml", "-n", "4", "-h", "3"])
    assert result.exit_code == 0, result.output
    # k = 2, channels [4, 4], widths [2, 2]: 21 features into the first layer
    assert "505 coordinates in 9 tensors" in result.stdout


def test_synth(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    result = runner.invoke(
        app, ["synth", "-o", "syn", "-n", "7", "-T", "12", "--seed", "2"]
    )
    assert result.exit_code == 0, result.output
    panel = read_panel_csv(tmp_path / "syn" / "panel.csv")
    truth = read_panel_csv(tmp_path / "syn" / "truth.csv")
    assert (panel.n, panel.T) == (7, 12)
    assert truth.ids == panel.ids
    assert (tmp_path / "syn" / "sensors.csv").is_file()


def test_evaluate(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    (tmp_path / "satcn.toml").write_text(
        "knn_k = [1, 3]\n"
        "[synthetic]\nn = 12\nT = 40\n"
        "[arch]\nk = 2\nchannels = [3]\ntcn_widths = [2]\nh = 3\n"
        "[train]\niterations = 3\nbatch_size = 2\nval_every = 1\n"
    )
    result = runner.invoke(app, ["evaluate", "-S", "7T8S", "-o", "run", "--seed", "1"])
    assert result.exit_code == 0, result.output

    meta, _ = read_meta(tmp_path / "run" / "metrics.csv")
    assert meta["scenario"] == "7T8S"
    assert meta["seed"] == "1"
    df = pd.read_csv(tmp_path / "run" / "metrics.csv", comment="#")
    assert df["method"].tolist() == ["SATCN", "kNN", "kNN"]
    assert (df["mae"] >= 0).all()
    assert (df["rmse"] >= df["mae"] - 1e-12).all()
    for name in ["report.md", "history.csv", "model.satcn"]:
        assert (tmp_path / "run" / name).is_file()
