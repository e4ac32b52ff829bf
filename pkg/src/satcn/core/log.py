"""Logging of satcn: rich output on stderr and an extra VERBOSE level."""

import logging
import time
from contextlib import contextmanager
from enum import Enum
from typing import Dict, Iterator, Optional

from rich.console import Console
from rich.logging import RichHandler

logger = logging.getLogger("satcn")

VERBOSE: int = 15
"""Level between INFO and DEBUG for per-iteration training messages."""


class SatcnLogLevel(Enum):
    """Log levels selectable with -v, -vv and -vvv (or the config flags)."""

    SILENT = "silent"
    INFO = "info"
    VERBOSE = "verbose"
    DEBUG = "debug"

    @staticmethod
    def from_flags(
        *,
        info: Optional[bool] = None,
        verbose: Optional[bool] = None,
        debug: Optional[bool] = None,
    ) -> "SatcnLogLevel":
        """Return the most detailed level whose flag is set."""
        for flag, level in (
            (debug, SatcnLogLevel.DEBUG),
            (verbose, SatcnLogLevel.VERBOSE),
            (info, SatcnLogLevel.INFO),
        ):
            if flag:
                return level
        return SatcnLogLevel.SILENT

    @staticmethod
    def to_logging(lv: "SatcnLogLevel") -> int:
        """Return the `logging` level of a satcn log level."""
        return _LOGGING_LEVELS[lv]


_LOGGING_LEVELS: Dict[SatcnLogLevel, int] = {
    SatcnLogLevel.SILENT: logging.WARNING,
    SatcnLogLevel.INFO: logging.INFO,
    SatcnLogLevel.VERBOSE: VERBOSE,
    SatcnLogLevel.DEBUG: logging.DEBUG,
}

_log_level: Optional[SatcnLogLevel] = None
_rich_handler: Optional[RichHandler] = None


def get_log_level() -> Optional[SatcnLogLevel]:
    """Return the level set by the user, None if none was set yet."""
    return _log_level


def set_log_level(log_level: SatcnLogLevel) -> None:
    """Set the log level and reconfigure the handler for it."""
    global _log_level
    _log_level = log_level
    init_log()
    logger.setLevel(SatcnLogLevel.to_logging(log_level))


def init_log() -> None:
    """Register the VERBOSE level and (re-)attach the rich handler."""
    _add_verbose_level()
    _attach_rich_handler(_log_level == SatcnLogLevel.DEBUG)


@contextmanager
def log_duration(what: str) -> Iterator[None]:
    """Log the wall time of the enclosed block at VERBOSE level."""
    start = time.perf_counter()
    try:
        yield
    finally:
        logger.verbose(f"{what} took {time.perf_counter() - start:.2f} s.")


def _add_verbose_level():
    if logging.getLevelName(VERBOSE) == "VERBOSE":
        return
    logging.addLevelName(VERBOSE, "VERBOSE")

    def verbose(self, message, *args, **kwargs):
        """Log a message with level VERBOSE."""
        if self.isEnabledFor(VERBOSE):
            self._log(VERBOSE, message, args, **kwargs)

    setattr(logging.Logger, "verbose", verbose)  # noqa: B010
    # satcn messages only go to the rich handler
    logger.propagate = False


def _attach_rich_handler(debug: bool):
    global _rich_handler
    if _rich_handler is not None:
        logger.removeHandler(_rich_handler)
    # stdout is kept free for command output
    _rich_handler = RichHandler(
        console=Console(stderr=True),
        markup=True,
        rich_tracebacks=True,
        tracebacks_show_locals=False,
        show_time=debug,
        show_level=debug,
        show_path=debug,
    )
    logger.addHandler(_rich_handler)


_add_verbose_level()
