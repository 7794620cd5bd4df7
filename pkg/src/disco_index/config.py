"""Runtime configuration via environment variables."""

import os
from pathlib import Path

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict

from .models.params import StandardizeMode


class Settings(BaseSettings):
    """Settings loaded from ``DISCO_*`` environment variables."""

    model_config = SettingsConfigDict(env_prefix="DISCO_", case_sensitive=False)

    # Scoring
    mu: int = Field(5, ge=1)
    standardize: StandardizeMode = StandardizeMode.PER_FEATURE

    # Parallelism; None means one worker per CPU
    threads: int | None = Field(None, ge=1)

    # Memory / algorithm knobs
    row_block_size: int = Field(1024, ge=1)
    kruskal_max_edges: int = Field(250_000, ge=1)

    # Output
    table_digits: int = Field(6, ge=1, le=17)
    debug: bool = False

    # Public benchmark CSVs (smile1.csv, 3-spiral.csv, ...)
    benchmark_dir: Path | None = None

    def worker_count(self) -> int:
        """Number of workers for per-point and per-setting pools."""
        return self.threads or os.cpu_count() or 1


settings = Settings()
