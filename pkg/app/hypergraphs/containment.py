"""Exhaustive subhypergraph containment search."""

from __future__ import annotations

from dataclasses import dataclass

from app.config.settings import get_settings
from app.core.exceptions import SearchBoundExceededError
from app.hypergraphs.hypergraph import Edge, Hypergraph3, edges_by_vertex


@dataclass(frozen=True, slots=True)
class VertexMap:
    """Injective map pattern vertex -> host vertex."""

    mapping: tuple[int, ...]

    def image(self, edge: Edge) -> Edge:
        return tuple(sorted(self.mapping[v] for v in edge))  # type: ignore[return-value]

    def is_embedding(self, host: Hypergraph3, pattern: Hypergraph3) -> bool:
        if len(self.mapping) != pattern.n or len(set(self.mapping)) != pattern.n:
            return False
        if any(not 0 <= v < host.n for v in self.mapping):
            return False
        return all(self.image(edge) in host.edges for edge in pattern.edges)


def _placement_order(pattern: Hypergraph3) -> list[int]:
    """Most constrained first: prefer vertices sharing edges with those already placed."""
    degrees = pattern.degrees()
    incident = edges_by_vertex(pattern)
    order: list[int] = []
    placed: set[int] = set()
    remaining = set(range(pattern.n))
    while remaining:
        def score(v: int) -> tuple[int, int, int]:
            closing = sum(1 for edge in incident[v] if sum(u in placed for u in edge) == 2)
            touching = sum(1 for edge in incident[v] if any(u in placed for u in edge))
            return (-closing, -touching, -degrees[v]) if placed else (0, 0, -degrees[v])

        v = min(sorted(remaining), key=score)
        order.append(v)
        placed.add(v)
        remaining.remove(v)
    return order


def contains_subhypergraph(
    host: Hypergraph3,
    pattern: Hypergraph3,
    max_pattern_vertices: int | None = None,
    max_host_vertices: int | None = None,
) -> VertexMap | None:
    """Return a map sending every pattern edge onto a host edge, or None if none exists."""
    settings = get_settings()
    pattern_limit = settings.containment_max_pattern_vertices if max_pattern_vertices is None else max_pattern_vertices
    host_limit = settings.containment_max_host_vertices if max_host_vertices is None else max_host_vertices
    if pattern.n > pattern_limit:
        raise SearchBoundExceededError("containment pattern vertex count", pattern_limit, pattern.n)
    if host.n > host_limit:
        raise SearchBoundExceededError("containment host vertex count", host_limit, host.n)
    if pattern.n > host.n or pattern.edge_count > host.edge_count:
        return None

    order = _placement_order(pattern)
    position = {v: i for i, v in enumerate(order)}
    closing_edges: list[list[Edge]] = [[] for _ in order]
    for edge in pattern.edges:
        closing_edges[max(position[v] for v in edge)].append(edge)

    pattern_degrees = pattern.degrees()
    host_degrees = host.degrees()
    host_edges = host.edges
    mapping = [-1] * pattern.n
    used = [False] * host.n

    def extend(step: int) -> bool:
        if step == len(order):
            return True
        p = order[step]
        for candidate in range(host.n):
            if used[candidate] or host_degrees[candidate] < pattern_degrees[p]:
                continue
            mapping[p] = candidate
            if all(
                tuple(sorted((mapping[a], mapping[b], mapping[c]))) in host_edges
                for a, b, c in closing_edges[step]
            ):
                used[candidate] = True
                if extend(step + 1):
                    return True
                used[candidate] = False
            mapping[p] = -1
        return False

    if extend(0):
        return VertexMap(mapping=tuple(mapping))
    return None
