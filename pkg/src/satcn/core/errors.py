"""Exception hierarchy of satcn.

Every error raised on purpose by satcn derives from `SatcnError`. The
subclasses also derive from a matching builtin, so callers that do not
know about satcn can still catch `ValueError` or `ArithmeticError`.
The `exit_code` of each class is what the CLI returns for it.
"""

from typing import Optional


class SatcnError(Exception):
    """Base class of all satcn errors."""

    exit_code: int = 1


class ConfigError(SatcnError, ValueError):
    """Invalid or missing configuration, or invalid CLI usage."""

    exit_code = 1


class NumericalError(SatcnError, ArithmeticError):
    """Non-finite values during training or a failed gradient check."""

    exit_code = 2


class DataError(SatcnError, ValueError):
    """Malformed or degenerate input data."""

    exit_code = 3


class GraphError(DataError):
    """Sensor geometry or graph construction failed."""


class SamplingError(DataError):
    """Training samples cannot be drawn from the given panel."""


class CsvFormatError(DataError):
    """A CSV file could not be parsed.

    Carries the 1-based line and column of the offending cell, if known.
    """

    def __init__(
        self,
        msg: str,
        *,
        path=None,
        line: Optional[int] = None,
        column: Optional[str] = None,
    ):
        """Create a CSV error with location info."""
        self.path = path
        self.line = line
        self.column = column
        loc = []
        if path is not None:
            loc.append(str(path))
        if line is not None:
            loc.append(f"line {line}")
        if column is not None:
            loc.append(f"column '{column}'")
        super().__init__(f"{', '.join(loc)}: {msg}" if loc else msg)
