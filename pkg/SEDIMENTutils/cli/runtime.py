"""Runtime settings read from the environment."""
import logging
import os

from ..exceptions import ConfigError

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"
DEFAULT_LOG_LEVEL = "WARNING"


def get_default_log_level() -> str:
    return os.getenv("SEDIMENT_LOG_LEVEL", DEFAULT_LOG_LEVEL)


def get_default_workers() -> int:
    raw = os.getenv("SEDIMENT_WORKERS")
    if not raw:
        return 1
    try:
        workers = int(raw)
    except ValueError as exc:
        raise ConfigError(f"SEDIMENT_WORKERS must be an integer, got {raw!r}") from exc
    if workers < 1:
        raise ConfigError(f"SEDIMENT_WORKERS must be >= 1, got {workers}")
    return workers


def configure_logging(level: str | None = None) -> int:
    """Configure the root logger once; ``level`` wins over SEDIMENT_LOG_LEVEL."""
    name = (level or get_default_log_level()).upper()
    numeric = logging.getLevelName(name)
    if not isinstance(numeric, int):
        raise ConfigError(f"Unknown log level '{name}'")
    logging.basicConfig(level=numeric, format=LOG_FORMAT, force=True)
    return numeric
