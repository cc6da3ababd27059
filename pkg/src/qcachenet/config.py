"""
QCacheNet Configuration

Environment variables and process-level settings.
Experiment parameters live in schemas/experiment.py.
"""

import logging
import os
from typing import Optional

from dotenv import load_dotenv

load_dotenv()


def get_env(key: str, default: Optional[str] = None) -> Optional[str]:
    """Get environment variable with optional default."""
    return os.getenv(key, default)


def get_int_env(key: str, default: int) -> int:
    """Get an integer environment variable, falling back on bad values."""
    raw = get_env(key)
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError:
        logging.getLogger(__name__).warning(
            f"Ignoring non-integer {key}={raw!r}, using {default}"
        )
        return default


# Application Settings
DEBUG = get_env("QCACHENET_DEBUG", "false").lower() == "true"
LOG_LEVEL = "DEBUG" if DEBUG else get_env("LOG_LEVEL", "INFO").upper()

# Parallelism
MAX_WORKERS = get_int_env("QCACHENET_WORKERS", 4)
MC_CHUNK_SIZE = get_int_env("QCACHENET_MC_CHUNK", 100_000)


def configure_logging(level: Optional[str] = None) -> None:
    """Configure root logging to stderr at the requested level."""
    logging.basicConfig(
        level=getattr(logging, (level or LOG_LEVEL).upper(), logging.INFO),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
