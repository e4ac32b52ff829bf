"""Core satcn functionality (logging, errors, configuration)."""

from . import log  # noqa: F401  registers logger.verbose
