"""Runtime configuration read from the environment (and optional .env files)."""

import os
from dataclasses import dataclass
from pathlib import Path

from dotenv import load_dotenv

from coisotropic.errors import ConfigError

# Load .env from the repository root, then a local .env if present
load_dotenv(Path(__file__).parent.parent / ".env")
load_dotenv()

_LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


@dataclass(frozen=True)
class Settings:
    log_level: str = "WARNING"
    report_workers: int = 4
    holonomy_word_length: int = 2
    max_polytope_dim: int = 4


def _int_env(name: str, default: int, minimum: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ConfigError(f"{name} must be an integer, got {raw!r}") from None
    if value < minimum:
        raise ConfigError(f"{name} must be at least {minimum}, got {value}")
    return value


def load_settings() -> Settings:
    """Read the COISO_* variables; unset variables fall back to defaults."""
    level = os.getenv("COISO_LOG_LEVEL", "WARNING").upper()
    if level not in _LOG_LEVELS:
        raise ConfigError(f"COISO_LOG_LEVEL must be one of {', '.join(_LOG_LEVELS)}, got {level!r}")
    return Settings(
        log_level=level,
        report_workers=_int_env("COISO_REPORT_WORKERS", 4, 1),
        holonomy_word_length=_int_env("COISO_HOLONOMY_WORD_LENGTH", 2, 1),
        max_polytope_dim=_int_env("COISO_MAX_POLYTOPE_DIM", 4, 0),
    )
