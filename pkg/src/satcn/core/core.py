"""Discovery and reading of satcn configuration files."""

import logging
from pathlib import Path
from typing import Any, Dict, Optional

import tomlkit

logger = logging.getLogger("satcn")

INPUT_FILES_ORDERED = [
    ".satcn.toml",
    "satcn.toml",
    "pyproject.toml",
]
"""Input files ordered by priority for discovery."""


def discover_input(input_file: Optional[Path] = None) -> Optional[Path]:
    """Check given config file path. If not given, find one from the default list.

    Args:
        input_file: satcn configuration file path. Defaults to None.

    Raises:
        FileNotFoundError: if an explicitly passed file does not exist.

    Returns:
        configuration file path, or None if no configuration file is found
        (all settings then have their defaults).

    """
    if input_file:
        if input_file.is_file():
            logger.info(f"Using provided file '{input_file}' as satcn config file.")
            return input_file
        raise FileNotFoundError(f"Passed config file '{input_file}' does not exist.")

    for filename in INPUT_FILES_ORDERED:
        candidate = Path(filename)
        if candidate.is_file():
            try:
                get_input_content(candidate)
            except RuntimeError:
                continue
            logger.verbose(f"Using '{candidate}' as satcn config file.")
            return candidate

    logger.verbose("No satcn config file found, using defaults.")
    return None


def get_input_content(path: Path) -> Dict[str, Any]:
    """Read the satcn section of a supported configuration file.

    Args:
        path: a `satcn.toml`/`.satcn.toml` file or a `pyproject.toml` with a
            `[tool.satcn]` table

    Returns:
        the configuration as a plain dict

    Raises:
        ValueError: if the file is not a supported TOML file.
        RuntimeError: if a pyproject.toml has no `[tool.satcn]` table.

    """
    logger.debug(f"Reading config from {path}")
    if path.suffix == ".toml" and "satcn" in path.name:
        with open(path, "r") as f:
            return tomlkit.load(f).unwrap()

    if path.suffix == ".toml" and "pyproject" in path.name:
        with open(path, "r") as f:
            content = tomlkit.load(f)
        if "tool" in content and "satcn" in content["tool"]:
            return content["tool"]["satcn"].unwrap()
        raise RuntimeError("No tool.satcn section found in pyproject.toml file!")

    raise ValueError(f"Unsupported config file: {path}")
