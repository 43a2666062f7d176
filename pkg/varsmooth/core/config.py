"""Configuration management for varsmooth."""

from functools import lru_cache

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Runtime settings loaded from environment variables."""

    # Application Settings
    app_name: str = "varsmooth"
    app_version: str = "1.0.0"
    debug: bool = False
    log_level: str = "INFO"

    # Output
    output_dir: str = "results"
    workers: int = Field(default=1, ge=1)

    # Numerical tolerances
    singular_tolerance: float = Field(default=1e-8, gt=0)
    orthonormal_tolerance: float = Field(default=1e-8, gt=0)
    line_search_max_trials: int = Field(default=60, ge=1)

    # Tracing
    log_every: int = Field(default=100, ge=1)
    value_every: int = Field(default=1, ge=1)

    model_config = SettingsConfigDict(
        env_prefix="VARSMOOTH_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )


@lru_cache()
def get_settings() -> Settings:
    """Get cached settings instance."""
    return Settings()
