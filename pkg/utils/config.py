import os
import logging
from contextlib import contextmanager
from contextvars import ContextVar
from dataclasses import dataclass, replace, fields
from typing import Optional

from dotenv import load_dotenv

from engine.errors import ConfigurationError

load_dotenv()

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EngineSettings:
    """Resource bounds and reproducibility knobs for the engine"""

    max_degree: int = 64
    ext_bound: int = 4
    dim_cap: int = 64
    seed: int = 0
    jobs: int = 1
    log_level: str = "WARNING"


_ENV_KEYS = {
    "max_degree": "TRACE_MAX_DEGREE",
    "ext_bound": "TRACE_EXT_BOUND",
    "dim_cap": "TRACE_DIM_CAP",
    "seed": "TRACE_SEED",
    "jobs": "TRACE_JOBS",
    "log_level": "TRACE_LOG_LEVEL",
}


def load_settings() -> EngineSettings:
    """
    Build settings from the environment (a .env file is honoured)

    Returns:
        EngineSettings with environment overrides applied
    """
    values = {}
    for name, key in _ENV_KEYS.items():
        raw = os.getenv(key)
        if raw is None or raw == "":
            continue
        if name == "log_level":
            values[name] = raw.upper()
            continue
        try:
            values[name] = int(raw)
        except ValueError:
            raise ConfigurationError(f"{key} must be an integer, got {raw!r}")
    settings = EngineSettings(**values)
    _validate(settings)
    return settings


def _validate(settings: EngineSettings):
    for f in fields(settings):
        value = getattr(settings, f.name)
        if f.name in ("seed", "log_level"):
            continue
        if value < 1:
            raise ConfigurationError(f"{f.name} must be positive, got {value}")
    if settings.seed < 0:
        raise ConfigurationError(f"seed must be nonnegative, got {settings.seed}")


_settings = None

# overrides are scoped to the current context; worker threads only see them
# when started through contextvars.copy_context()
_overridden: ContextVar[Optional[EngineSettings]] = ContextVar("trace_settings", default=None)


def get_settings() -> EngineSettings:
    global _settings
    current = _overridden.get()
    if current is not None:
        return current
    if _settings is None:
        _settings = load_settings()
    return _settings


@contextmanager
def override_settings(**overrides):
    """Temporarily replace selected settings in the current context (None values are ignored)"""
    updated = replace(get_settings(), **{k: v for k, v in overrides.items() if v is not None})
    _validate(updated)
    token = _overridden.set(updated)
    try:
        yield updated
    finally:
        _overridden.reset(token)
