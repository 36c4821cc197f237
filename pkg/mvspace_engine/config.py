"""
Engine settings loaded from environment variables.
"""

import os
from typing import Optional

from pydantic import BaseModel, Field, field_validator

_ENV_PREFIX = "MVSPACE_"
_LOG_LEVELS = {"CRITICAL", "ERROR", "WARNING", "INFO", "DEBUG"}


class EngineSettings(BaseModel):
    """Budgets and switches shared by every module."""

    oracle_max_elements: int = Field(default=243, ge=1)
    oracle_max_checks: int = Field(default=1_000_000, ge=1)
    witness_search_limit: int = Field(default=10_000, ge=1)
    debug_checks: bool = False
    log_level: str = "WARNING"

    @field_validator("log_level")
    @classmethod
    def _known_level(cls, value: str) -> str:
        level = value.upper()
        if level not in _LOG_LEVELS:
            raise ValueError(f"unknown log level: {value}")
        return level

    @classmethod
    def from_env(cls) -> "EngineSettings":
        """
        Build settings from MVSPACE_* environment variables.

        Unset variables keep their defaults; pydantic performs the coercion
        and validation of the raw strings.
        """
        values = {}
        for name in cls.model_fields:
            raw = os.environ.get(_ENV_PREFIX + name.upper())
            if raw is not None:
                values[name] = raw
        return cls(**values)


_settings: Optional[EngineSettings] = None


def get_settings() -> EngineSettings:
    global _settings
    if _settings is None:
        _settings = EngineSettings.from_env()
    return _settings


def configure(**overrides) -> EngineSettings:
    """Replace the active settings, starting from the environment."""
    global _settings
    base = EngineSettings.from_env().model_dump()
    base.update(overrides)
    _settings = EngineSettings(**base)
    return _settings


def reset_settings() -> None:
    global _settings
    _settings = None
