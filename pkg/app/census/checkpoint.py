"""Census checkpoints: a main file of completed tasks plus per-task frontier snapshots."""

from __future__ import annotations

import os
import tempfile
from pathlib import Path

import structlog
from pydantic import BaseModel, ValidationError
from tenacity import Retrying, retry_if_exception_type, stop_after_attempt, wait_exponential

from app.core.exceptions import CheckpointMismatchError
from app.models.schemas import CensusCheckpoint, CensusParams, TaskOutcome, TaskSnapshot

logger = structlog.get_logger(__name__)


def write_json_atomic(path: Path, model: BaseModel, retry_attempts: int = 3) -> None:
    """Write through a temp file in the same directory and swap it into place."""
    path.parent.mkdir(parents=True, exist_ok=True)
    payload = model.model_dump_json(indent=2)
    fd, temp_name = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=path.parent)
    with os.fdopen(fd, "w", encoding="utf-8") as handle:
        handle.write(payload)

    retrier = Retrying(
        wait=wait_exponential(multiplier=0.05, min=0.05, max=1),
        stop=stop_after_attempt(retry_attempts),
        retry=retry_if_exception_type(OSError),
        reraise=True,
    )
    try:
        for attempt in retrier:
            with attempt:
                os.replace(temp_name, path)
    finally:
        if os.path.exists(temp_name):
            os.unlink(temp_name)


def task_file_name(task_key: str) -> str:
    return task_key.replace(":", "-") + ".json"


class CheckpointStore:
    """Checkpoint at ``path`` with task snapshots in the sibling directory ``path.d``."""

    def __init__(self, path: Path, params: CensusParams, retry_attempts: int = 3) -> None:
        self.path = path
        self.snapshot_dir = path.with_name(path.name + ".d")
        self.params = params
        self._retry_attempts = retry_attempts
        self._state = CensusCheckpoint(params=params)

    @property
    def completed(self) -> dict[str, TaskOutcome]:
        return self._state.completed

    def load(self) -> None:
        """Adopt an existing checkpoint; its parameters must match this run."""
        if not self.path.exists():
            return
        try:
            state = CensusCheckpoint.model_validate_json(self.path.read_text(encoding="utf-8"))
        except (OSError, ValidationError) as exc:
            raise CheckpointMismatchError(f"checkpoint {self.path} is unreadable: {exc}") from exc
        if state.params != self.params:
            raise CheckpointMismatchError(
                f"checkpoint {self.path} was written for {state.params.model_dump()}, "
                f"not {self.params.model_dump()}"
            )
        self._state = state
        logger.info("checkpoint_loaded", path=str(self.path), completed=len(state.completed))

    def reset(self) -> None:
        self._state = CensusCheckpoint(params=self.params)
        if self.snapshot_dir.exists():
            for stale in self.snapshot_dir.glob("*.json"):
                stale.unlink()
        self.save()

    def record(self, task_key: str, outcome: TaskOutcome) -> None:
        self._state.completed[task_key] = outcome
        self.save()
        snapshot = self.snapshot_dir / task_file_name(task_key)
        if snapshot.exists():
            snapshot.unlink()

    def save(self) -> None:
        write_json_atomic(self.path, self._state, self._retry_attempts)
        logger.debug("checkpoint_saved", path=str(self.path), completed=len(self._state.completed))

    def snapshot_path(self, task_key: str) -> Path:
        return self.snapshot_dir / task_file_name(task_key)

    def load_snapshot(self, task_key: str) -> TaskSnapshot | None:
        path = self.snapshot_path(task_key)
        if not path.exists():
            return None
        try:
            snapshot = TaskSnapshot.model_validate_json(path.read_text(encoding="utf-8"))
        except (OSError, ValidationError):
            logger.warning("snapshot_discarded", path=str(path))
            return None
        return snapshot if snapshot.task_key == task_key else None
