"""Minimal non-vanishing 3-graphs by augmentation restricted to vanishing graphs.

Non-vanishing is preserved by adding edges, so the search only ever extends
vanishing graphs; a non-vanishing child is recorded when all of its
single-edge deletions vanish and is never extended. The tree is cut at a fixed
depth into tasks keyed by canonical form; results are merged by key.
"""

from __future__ import annotations

import threading
from collections.abc import Callable
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass
from math import comb
from pathlib import Path

import structlog
from cachetools import LRUCache
from tqdm import tqdm

from app.census.augmentation import augmentations
from app.census.checkpoint import CheckpointStore, write_json_atomic
from app.config.settings import get_settings
from app.core.exceptions import SearchBoundExceededError
from app.hypergraphs.canonical import canonical_form
from app.hypergraphs.hypergraph import Edge, Hypergraph3, delete_edge
from app.models.schemas import (
    Catalog,
    CensusParams,
    CensusRecord,
    FrontierNode,
    TaskOutcome,
    TaskSnapshot,
)
from app.orderings.roles import RoleConflict, roles_under_ordering
from app.orderings.search import find_vanishing_ordering

logger = structlog.get_logger(__name__)


@dataclass(frozen=True, slots=True)
class CensusNode:
    """Canonical representative of a vanishing class with one of its vanishing orderings."""

    graph: Hypergraph3
    ordering: tuple[int, ...]

    def to_frontier(self) -> FrontierNode:
        return FrontierNode(edges=self.graph.sorted_edges(), ordering=list(self.ordering))

    @classmethod
    def from_frontier(cls, n: int, node: FrontierNode) -> "CensusNode":
        return cls(graph=Hypergraph3.from_edges(n, node.edges), ordering=tuple(node.ordering))


class MinimalityChecker:
    """Vanishing verdicts memoized by canonical key."""

    def __init__(self, cache_size: int) -> None:
        self._cache: LRUCache = LRUCache(maxsize=cache_size)
        self._lock = threading.Lock()

    def is_vanishing(self, h: Hypergraph3) -> bool:
        key = canonical_form(h).key
        with self._lock:
            cached = self._cache.get(key)
        if cached is not None:
            return cached
        verdict = find_vanishing_ordering(h) is not None
        with self._lock:
            self._cache[key] = verdict
        return verdict

    def remember(self, h: Hypergraph3, vanishing: bool) -> None:
        with self._lock:
            self._cache[canonical_form(h).key] = vanishing

    def is_minimal(self, h: Hypergraph3) -> bool:
        """Non-vanishing assumed; every single-edge deletion must vanish."""
        return all(self.is_vanishing(delete_edge(h, edge)) for edge in h.sorted_edges())


def expand(node: CensusNode, checker: MinimalityChecker) -> tuple[list[CensusNode], list[Hypergraph3]]:
    """Vanishing children to explore and minimal non-vanishing children, both as canonical representatives."""
    vanishing_children: list[CensusNode] = []
    minimal: list[Hypergraph3] = []
    for child, form in augmentations(node.graph):
        representative = form.representative()
        ordering: tuple[int, ...] | None = None
        if not isinstance(roles_under_ordering(child, node.ordering), RoleConflict):
            ordering = tuple(form.labeling[v] for v in node.ordering)
        else:
            cert = find_vanishing_ordering(representative)
            if cert is not None:
                ordering = tuple(cert.ordering)
        if ordering is not None:
            checker.remember(representative, True)
            vanishing_children.append(CensusNode(graph=representative, ordering=ordering))
            continue
        checker.remember(representative, False)
        if checker.is_minimal(representative):
            minimal.append(representative)
    return vanishing_children, minimal


_checker: MinimalityChecker | None = None


def _process_checker() -> MinimalityChecker:
    global _checker
    if _checker is None:
        _checker = MinimalityChecker(get_settings().minimality_cache_size)
    return _checker


def run_task(
    n: int,
    max_edges: int,
    task_key: str,
    stack: list[FrontierNode],
    found: list[list[Edge]],
    nodes: int,
    snapshot_path: Path | None,
    checkpoint_interval: int,
) -> TaskOutcome:
    """Depth-first walk of one subtree with an explicit stack, snapshotting the frontier periodically."""
    checker = _process_checker()
    pending = [CensusNode.from_frontier(n, node) for node in stack]
    minimal = [list(edges) for edges in found]
    while pending:
        node = pending.pop()
        nodes += 1
        if node.graph.edge_count < max_edges:
            children, hits = expand(node, checker)
            minimal.extend(hit.sorted_edges() for hit in hits)
            pending.extend(reversed(children))
        if snapshot_path is not None and nodes % checkpoint_interval == 0:
            snapshot = TaskSnapshot(
                task_key=task_key,
                stack=[item.to_frontier() for item in pending],
                minimal=minimal,
                nodes=nodes,
            )
            write_json_atomic(snapshot_path, snapshot)
            logger.info("census_snapshot_saved", task=task_key, nodes=nodes, frontier=len(pending))
    return TaskOutcome(minimal=minimal, nodes=nodes)


def _run_task_args(args: tuple) -> tuple[str, TaskOutcome]:
    return args[2], run_task(*args)


def _prefix(n: int, shard_depth: int, max_edges: int, checker: MinimalityChecker) -> tuple[list[CensusNode], list[Hypergraph3], int]:
    """Expand the tree down to the shard depth in-process; return task roots, early hits and nodes visited."""
    frontier = [CensusNode(graph=Hypergraph3(n=n, edges=frozenset()), ordering=tuple(range(n)))]
    minimal: list[Hypergraph3] = []
    visited = 0
    for _ in range(shard_depth):
        next_frontier: list[CensusNode] = []
        for node in frontier:
            visited += 1
            if node.graph.edge_count >= max_edges:
                continue
            children, hits = expand(node, checker)
            next_frontier.extend(children)
            minimal.extend(hits)
        frontier = next_frontier
    return frontier, minimal, visited


def _record(h: Hypergraph3) -> CensusRecord:
    return CensusRecord(
        canonical_key=canonical_form(h).key,
        n=h.n,
        edges=h.sorted_edges(),
        vanishing=False,
        minimal=True,
        isolated_vertex_count=len(h.isolated_vertices()),
    )


def find_minimal_nonvanishing(
    n: int,
    max_edges: int | None = None,
    jobs: int | None = None,
    checkpoint: Path | None = None,
    resume: bool = False,
    shard_depth: int | None = None,
    progress: bool = False,
    on_task: Callable[[str, TaskOutcome], None] | None = None,
) -> Catalog:
    """All minimal non-vanishing classes on exactly ``n`` vertices, isolated vertices allowed."""
    settings = get_settings()
    if n > settings.census_max_vertices:
        raise SearchBoundExceededError("census vertex count", settings.census_max_vertices, n)
    total_triples = comb(n, 3)
    max_edges = total_triples if max_edges is None else min(max_edges, total_triples)
    jobs = settings.jobs if jobs is None else jobs
    shard_depth = settings.census_shard_depth if shard_depth is None else shard_depth

    params = CensusParams(n=n, max_edges=max_edges, shard_depth=shard_depth)
    store: CheckpointStore | None = None
    if checkpoint is not None:
        store = CheckpointStore(checkpoint, params, settings.checkpoint_retry_attempts)
        if resume:
            store.load()
        else:
            store.reset()

    checker = _process_checker()
    roots, early, prefix_nodes = _prefix(n, shard_depth, max_edges, checker)
    tasks = {canonical_form(root.graph).key: root for root in roots}
    completed: dict[str, TaskOutcome] = dict(store.completed) if store is not None else {}
    completed = {key: outcome for key, outcome in completed.items() if key in tasks}

    work = []
    for key in sorted(tasks):
        if key in completed:
            continue
        snapshot = store.load_snapshot(key) if store is not None else None
        if snapshot is not None:
            stack, found, nodes = snapshot.stack, snapshot.minimal, snapshot.nodes
            logger.info("census_task_resumed", task=key, nodes=nodes, frontier=len(stack))
        else:
            stack, found, nodes = [tasks[key].to_frontier()], [], 0
        snapshot_path = store.snapshot_path(key) if store is not None else None
        work.append((n, max_edges, key, stack, found, nodes, snapshot_path, settings.census_checkpoint_interval))

    logger.info("census_started", n=n, max_edges=max_edges, tasks=len(tasks), pending=len(work), jobs=jobs)

    def finish(key: str, outcome: TaskOutcome) -> None:
        completed[key] = outcome
        if store is not None:
            store.record(key, outcome)
        if on_task is not None:
            on_task(key, outcome)
        logger.debug("census_task_completed", task=key, nodes=outcome.nodes, minimal=len(outcome.minimal))

    with tqdm(total=len(work), desc=f"census n={n}", unit="task", disable=not progress) as bar:
        if jobs <= 1:
            for args in work:
                finish(*_run_task_args(args))
                bar.update(1)
        else:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                futures = [pool.submit(_run_task_args, args) for args in work]
                for future in as_completed(futures):
                    finish(*future.result())
                    bar.update(1)

    found: dict[str, CensusRecord] = {}
    for h in early:
        record = _record(h)
        found[record.canonical_key] = record
    for outcome in completed.values():
        for edges in outcome.minimal:
            record = _record(Hypergraph3.from_edges(n, edges))
            found.setdefault(record.canonical_key, record)

    records = sorted(found.values(), key=lambda r: (len(r.edges), r.edges))
    nodes_visited = prefix_nodes + sum(outcome.nodes for outcome in completed.values())
    logger.info("census_completed", n=n, minimal=len(records), nodes=nodes_visited)
    return Catalog(
        n=n,
        max_edges=max_edges,
        shard_depth=shard_depth,
        records=records,
        completed_tasks=len(completed),
        total_tasks=len(tasks),
        nodes_visited=nodes_visited,
    )
