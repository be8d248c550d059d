"""Configuration settings for distfree using Pydantic Settings."""

from functools import lru_cache
from typing import Literal

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Process-level settings loaded from environment variables.

    These knobs change how fast or how verbosely a run executes, never its
    numerical result, so they live outside the run configuration file.
    """

    model_config = SettingsConfigDict(
        env_prefix="DISTFREE_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    # Logging Configuration
    log_level: Literal["DEBUG", "INFO", "WARNING", "ERROR"] = "INFO"

    # Assembly Configuration
    assembly_workers: int = Field(4, ge=1)  # Threads used for Gram matrix chunks
    assembly_chunk_entries: int = Field(2**22, ge=1024)  # Kernel entries per chunk

    # Conditioning Configuration
    full_covariance_cap: int = Field(4096, ge=1)  # Above this only the variance is kept
    jitter_policy: float = Field(1e-10, gt=0.0)
    max_jitter_escalations: int = Field(3, ge=0)


@lru_cache
def get_settings() -> Settings:
    """Get cached settings instance.

    Raises:
        ValidationError: If an environment override is invalid.
    """
    return Settings()
