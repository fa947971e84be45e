"""Runtime settings read from the environment (and an optional .env file)."""

from __future__ import annotations

import logging
import os
from pathlib import Path

from dotenv import load_dotenv
from pydantic import BaseModel, Field, field_validator

logger = logging.getLogger(__name__)

DEFAULT_EVALUATION_LIMIT = 20_000_000


class Settings(BaseModel):
    """Process-wide knobs.

    ``threads`` caps the worker pool used by the verification harness,
    ``evaluation_limit`` caps exhaustive enumerations.
    """

    threads: int = Field(default_factory=lambda: os.cpu_count() or 1, ge=1)
    log_level: str = "INFO"
    evaluation_limit: int = Field(default=DEFAULT_EVALUATION_LIMIT, ge=1)

    @field_validator("log_level")
    @classmethod
    def _upper(cls, value: str) -> str:
        value = value.upper()
        if value not in logging.getLevelNamesMapping():
            raise ValueError(f"unknown log level: {value}")
        return value

    @classmethod
    def from_env(cls) -> "Settings":
        """Build settings from MORPHSAMPLE_* environment variables."""
        data: dict[str, object] = {}
        if threads := os.getenv("MORPHSAMPLE_THREADS"):
            data["threads"] = int(threads)
        if level := os.getenv("MORPHSAMPLE_LOG_LEVEL"):
            data["log_level"] = level
        if limit := os.getenv("MORPHSAMPLE_EVALUATION_LIMIT"):
            data["evaluation_limit"] = int(limit)
        return cls(**data)


def load_settings(env_path: Path | None = None) -> Settings:
    """Load ``.env`` (if present) and return the resulting settings."""
    env_path = env_path or Path.cwd() / ".env"
    if env_path.exists():
        load_dotenv(env_path)
        logger.info(f"Loaded environment from {env_path}")
    return Settings.from_env()
