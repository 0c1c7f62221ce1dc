"""
Runtime settings for the virtual extension toolkit.
Values come from VEXT_* environment variables (a .env file is honoured)
and can be overridden at runtime by the CLI.
"""

import os
from typing import Optional

from dotenv import load_dotenv
from loguru import logger
from pydantic import BaseModel, Field

load_dotenv()

ENV_PREFIX = "VEXT_"


class Settings(BaseModel):
    horizon: int = Field(10000, ge=1)
    tol: float = Field(1e-9, gt=0)
    max_period: int = Field(64, ge=1)
    max_degree: int = Field(32, ge=0)
    seed: int = 0
    precision: int = Field(50, ge=15)  # mpmath decimal digits
    grid_start: int = Field(16, ge=1)
    grid_ratio: int = Field(2, ge=2)
    fragment_period: int = Field(2, ge=1)
    size_limit: int = Field(200_000, ge=1)
    n_jobs: int = 1

    model_config = {"validate_assignment": True}

    @classmethod
    def from_env(cls):
        """Build settings from VEXT_* environment variables"""
        values = {}
        for name in cls.model_fields:
            raw = os.environ.get(ENV_PREFIX + name.upper())
            if raw is not None:
                values[name] = raw
        if values:
            logger.debug(f"Settings overridden from environment: {sorted(values)}")
        return cls(**values)


_settings: Optional[Settings] = None


def get_settings() -> Settings:
    global _settings

    if _settings is None:
        _settings = Settings.from_env()
    return _settings


def configure(**overrides) -> Settings:
    """Replace the process-wide settings, keeping unspecified fields"""
    global _settings

    current = get_settings().model_dump()
    current.update({k: v for k, v in overrides.items() if v is not None})
    _settings = Settings(**current)
    return _settings
