"""Dependency container for application services."""

from __future__ import annotations

from app.config.settings import Settings
from app.services.census_service import CensusService


class ServiceContainer:
    """Create and hold singleton service instances."""

    def __init__(self, settings: Settings) -> None:
        self.settings = settings
        self.census_service = CensusService(
            jobs=settings.jobs,
            shard_depth=settings.census_shard_depth,
            output_dir=settings.output_dir,
        )
