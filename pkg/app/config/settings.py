"""Toolkit settings loaded from environment variables."""

from functools import lru_cache
from pathlib import Path

from pydantic import Field, model_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

BASE_DIR = Path(__file__).resolve().parents[2]


class Settings(BaseSettings):
    """Search bounds, census knobs and runtime options."""

    model_config = SettingsConfigDict(
        env_prefix="TURAN_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    app_name: str = "turan27"
    log_level: str = "INFO"
    jobs: int = Field(default=1, ge=1)
    output_dir: Path = Field(default=BASE_DIR / "runs")

    canonical_max_vertices: int = 10
    canonical_cache_size: int = 65536

    containment_max_pattern_vertices: int = 8
    containment_max_host_vertices: int = 16

    ordering_max_vertices: int = 12
    oracle_max_vertices: int = 12

    palette_max_vertices: int = 12
    palette_max_colors: int = 4

    certify_max_vertices: int = 10

    census_max_vertices: int = 7
    census_shard_depth: int = 2
    census_checkpoint_interval: int = 100_000
    checkpoint_retry_attempts: int = 3
    minimality_cache_size: int = 262144

    exact_density_max_vertices: int = 20
    density_batch_size: int = 4096

    partitioned_max_pattern_vertices: int = 7
    partitioned_max_indices: int = 10
    partitioned_max_part_size: int = 8

    sample_generator: str = "PCG64"

    @model_validator(mode="after")
    def normalize_paths(self) -> "Settings":
        """Resolve relative paths against project base directory."""
        if not self.output_dir.is_absolute():
            self.output_dir = (BASE_DIR / self.output_dir).resolve()
        return self


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    """Return singleton settings instance."""
    return Settings()
