import pytest
import typer

from satcn.cli.util import exit_code_of, resolved_config, wrap_exceptions
from satcn.core.errors import (
    ConfigError,
    CsvFormatError,
    DataError,
    GraphError,
    NumericalError,
)
from satcn.core.log import VERBOSE, SatcnLogLevel, log_duration


def test_resolved_config(data_dir):
    cli_args = {"train.iterations": 9, "seed": None, "arch.k": 1}
    config = resolved_config(data_dir / "satcn.toml", **cli_args)

    # values from the file
    assert config.seed == 3
    assert config.train.batch_size == 2
    # overwritten values
    assert config.train.iterations == 9
    assert config.arch.k == 1
    # defaults
    assert config.train.learning_rate == 1e-3
    assert config.debug is True


def test_resolved_config_defaults(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    config = resolved_config(None, seed=8)
    assert config.seed == 8
    assert config.arch.channels == [32, 32]


def test_resolved_config_errors(data_dir):
    with pytest.raises(ConfigError):
        resolved_config(data_dir / "missing.toml")
    bad = data_dir / "bad_satcn.toml"
    bad.write_text("[arch]\nk = 0\n")
    with pytest.raises(ConfigError):
        resolved_config(bad)
    with pytest.raises(ConfigError):
        resolved_config(data_dir / "satcn.toml", **{"train.iterations": -2})


@pytest.mark.parametrize(
    "error, code",
    [
        (ConfigError("x"), 1),
        (NumericalError("x"), 2),
        (DataError("x"), 3),
        (GraphError("x"), 3),
        (CsvFormatError("x", path="a.csv", line=3, column="b"), 3),
        (KeyError("x"), 1),
    ],
)
def test_exit_codes(error, code):
    assert exit_code_of(error) == code


def test_wrap_exceptions(mocker):
    log = mocker.patch("satcn.cli.util.logger")

    @wrap_exceptions
    def failing():
        raise GraphError("All sensors are at the same position.")

    with pytest.raises(typer.Exit) as e:
        failing()
    assert e.value.exit_code == 3
    assert "same position" in log.error.call_args[0][0]

    @wrap_exceptions
    def exiting():
        raise typer.Exit(code=0)

    with pytest.raises(typer.Exit) as e:
        exiting()
    assert e.value.exit_code == 0

    @wrap_exceptions
    def fine(x):
        return x + 1

    assert fine(1) == 2


def test_csv_error_message():
    e = CsvFormatError("Invalid value 'oops'.", path="p.csv", line=3, column="b")
    assert str(e) == "p.csv, line 3, column 'b': Invalid value 'oops'."
    assert isinstance(e, ValueError)


def test_log_duration(mocker):
    log = mocker.patch("satcn.core.log.logger")
    with log_duration("Training"):
        pass
    message = log.verbose.call_args[0][0]
    assert message.startswith("Training took ")
    assert message.endswith(" s.")


def test_log_level_mapping():
    assert SatcnLogLevel.from_flags(info=True, debug=True) == SatcnLogLevel.DEBUG
    assert SatcnLogLevel.from_flags() == SatcnLogLevel.SILENT
    assert SatcnLogLevel.to_logging(SatcnLogLevel.VERBOSE) == VERBOSE
