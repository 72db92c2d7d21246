import os
import logging
from pathlib import Path
from typing import Dict, Optional, Union

from hapticpen import exceptions

logger = logging.getLogger(__name__)


def get_config_path() -> Optional[Path]:
    """Returns the default config file the CLI will read if unspecified. Can be
    set by the environment variable HAPTI_CONFIG."""
    path = os.environ.get("HAPTI_CONFIG")
    if not path:
        logger.debug("No config file was specified, will use built-in defaults")
        return None
    return Path(path)


def get_default_seed() -> int:
    """Returns the default seed if unspecified. Can be overridden by the
    environment variable HAPTI_SEED."""
    seed = os.environ.get("HAPTI_SEED")
    if seed is None:
        return 0
    try:
        return int(seed)
    except ValueError:
        raise exceptions.InvalidArgumentError(
            f"HAPTI_SEED must be an integer, got '{seed}'"
        ) from None


def parse_key_values(text: str, source: str = "<string>") -> Dict[str, str]:
    """Parses flat ``key = value`` text.

    Blank lines and lines starting with ``#`` are ignored. Trailing ``#``
    comments are stripped.
    """
    values = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key or not value:
            raise exceptions.InvalidArgumentError(
                f"{source}:{number}: expected 'key = value', got '{raw.strip()}'"
            )
        if key in values:
            raise exceptions.InvalidArgumentError(
                f"{source}:{number}: duplicate key '{key}'"
            )
        values[key] = value
    return values


def read_key_values(path: Union[str, Path]) -> Dict[str, str]:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise exceptions.InvalidArgumentError(
            f"Could not read config file '{path}': {e}"
        ) from e
    logger.debug(f"Reading key=value file {path}")
    return parse_key_values(text, str(path))
