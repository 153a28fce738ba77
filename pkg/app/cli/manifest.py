"""Run manifests: what was run, with which seeds and versions, and a digest of everything it produced."""

from __future__ import annotations

import hashlib
import platform
import sys
import time
from datetime import datetime
from importlib.metadata import PackageNotFoundError, version
from pathlib import Path

import structlog

from app.core.constants import UTC_TIMEZONE
from app.models.schemas import RunManifest

logger = structlog.get_logger(__name__)

TRACKED_PACKAGES = ("numpy", "networkx", "pydantic", "pydantic-settings", "structlog", "cachetools", "tenacity", "tqdm")


def package_versions() -> dict[str, str]:
    versions = {"python": platform.python_version()}
    for name in TRACKED_PACKAGES:
        try:
            versions[name] = version(name)
        except PackageNotFoundError:
            versions[name] = "not-installed"
    return versions


def result_digest(stdout_text: str, outputs: list[Path]) -> str:
    """SHA-256 over the result text, then each written file in name order."""
    digest = hashlib.sha256(stdout_text.encode("utf-8"))
    for path in sorted(outputs, key=lambda p: p.name):
        digest.update(path.name.encode("utf-8"))
        digest.update(path.read_bytes())
    return digest.hexdigest()


class RunRecorder:
    """Collects stdout text, seeds and output files for one CLI invocation."""

    def __init__(self, subcommand: str, argv: list[str]) -> None:
        self.subcommand = subcommand
        self.argv = argv
        self.seeds: list[int] = []
        self.outputs: list[Path] = []
        self._chunks: list[str] = []
        self._started_at = datetime.now(tz=UTC_TIMEZONE)
        self._clock = time.perf_counter()

    def emit(self, text: str) -> None:
        self._chunks.append(text + "\n")
        sys.stdout.write(text + "\n")

    @property
    def stdout_text(self) -> str:
        return "".join(self._chunks)

    def finish(self, exit_code: int) -> RunManifest:
        existing = [path for path in self.outputs if path.is_file()]
        manifest = RunManifest(
            subcommand=self.subcommand,
            argv=self.argv,
            seeds=self.seeds,
            versions=package_versions(),
            started_at=self._started_at,
            finished_at=datetime.now(tz=UTC_TIMEZONE),
            wall_clock_sec=round(time.perf_counter() - self._clock, 6),
            exit_code=exit_code,
            outputs=[str(path) for path in existing],
            result_digest=result_digest(self.stdout_text, existing),
        )
        logger.info("run_manifest", **manifest.model_dump(mode="json"))
        return manifest
