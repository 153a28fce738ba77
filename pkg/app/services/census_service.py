"""Service running the minimal non-vanishing census end to end."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import structlog

from app.census.catalog import paper_catalog_seven, record_graph, write_catalog
from app.census.classify import classify_catalog
from app.census.minimal import find_minimal_nonvanishing
from app.hypergraphs.canonical import canonical_form
from app.models.schemas import Catalog, CensusBucket


@dataclass(frozen=True, slots=True)
class CensusSummary:
    n: int
    minimal: int
    certified: int
    avoided: int
    unresolved: int
    isolated: int

    @classmethod
    def from_catalog(cls, catalog: Catalog) -> "CensusSummary":
        buckets = [record.bucket for record in catalog.records]
        return cls(
            n=catalog.n,
            minimal=len(catalog.records),
            certified=buckets.count(CensusBucket.certified),
            avoided=buckets.count(CensusBucket.palette_avoided),
            unresolved=buckets.count(CensusBucket.unresolved),
            isolated=sum(1 for record in catalog.records if record.isolated_vertex_count > 0),
        )

    def line(self) -> str:
        return (
            f"{self.minimal} minimal, {self.certified} certified, "
            f"{self.avoided} avoided, {self.isolated} with isolated vertices"
        )


@dataclass(frozen=True, slots=True)
class CensusRun:
    catalog: Catalog
    summary: CensusSummary
    outputs: list[Path]


class CensusService:
    """Enumerate, classify and persist the census for one vertex count."""

    def __init__(self, jobs: int, shard_depth: int, output_dir: Path) -> None:
        self._jobs = jobs
        self._shard_depth = shard_depth
        self._output_dir = output_dir
        self._logger = structlog.get_logger(__name__)

    def default_output(self, n: int) -> Path:
        return self._output_dir / f"census-n{n}"

    def run(
        self,
        n: int,
        max_edges: int | None = None,
        jobs: int | None = None,
        checkpoint: Path | None = None,
        resume: bool = False,
        output: Path | None = None,
        progress: bool = False,
    ) -> CensusRun:
        jobs = jobs or self._jobs
        catalog = find_minimal_nonvanishing(
            n,
            max_edges=max_edges,
            jobs=jobs,
            checkpoint=checkpoint,
            resume=resume,
            shard_depth=self._shard_depth,
            progress=progress,
        )
        catalog = classify_catalog(catalog, jobs=jobs)
        summary = CensusSummary.from_catalog(catalog)
        outputs = write_catalog(catalog, output or self.default_output(n))
        self._logger.info("census_run_completed", summary=summary.line(), outputs=[str(p) for p in outputs])
        return CensusRun(catalog=catalog, summary=summary, outputs=outputs)

    @staticmethod
    def unmatched_certified(catalog: Catalog) -> list[str]:
        """Certified 7-vertex records outside the published nine-graph list, by canonical key."""
        published = {canonical_form(h).key for h in paper_catalog_seven()}
        return [
            record.canonical_key
            for record in catalog.records
            if record.bucket is CensusBucket.certified and canonical_form(record_graph(record)).key not in published
        ]
