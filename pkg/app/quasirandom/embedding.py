"""Embedding a small 3-graph into a partitioned hypergraph.

Vertex i of the pattern receives a distinct index a_i, and every pair ij a
vertex of the part V_{a_i a_j}; each pattern edge ijk must land on an edge of
the triad spanned by a_i, a_j and a_k.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from app.config.settings import get_settings
from app.core.exceptions import SearchBoundExceededError
from app.hypergraphs.hypergraph import Edge, Hypergraph3, Pair
from app.quasirandom.partitioned import PartitionedHypergraph, Triad


@dataclass(frozen=True, slots=True)
class PartitionedEmbedding:
    """Index per pattern vertex and part-vertex per pattern pair (index within its part)."""

    indices: tuple[int, ...]
    pair_vertices: dict[Pair, int]

    def is_valid(self, pattern: Hypergraph3, ph: PartitionedHypergraph) -> bool:
        if len(self.indices) != pattern.n or len(set(self.indices)) != pattern.n:
            return False
        if any(not 0 <= a < ph.n for a in self.indices):
            return False
        for pair in combinations(range(pattern.n), 2):
            vertex = self.pair_vertices.get(pair)
            if vertex is None or not 0 <= vertex < ph.size(self.indices[pair[0]], self.indices[pair[1]]):
                return False
        return all(_image(edge, self.indices, self.pair_vertices) in ph.edges for edge in pattern.edges)


def _image(edge: Edge, indices: tuple[int, ...], chosen: dict[Pair, int]) -> tuple[int, ...]:
    """The triad edge hit by a pattern edge under an index assignment and pair choices."""
    by_index = sorted(edge, key=lambda x: indices[x])
    x, y, z = by_index
    p, q, r = indices[x], indices[y], indices[z]
    return (
        p,
        q,
        r,
        chosen[(min(x, y), max(x, y))],
        chosen[(min(x, z), max(x, z))],
        chosen[(min(y, z), max(y, z))],
    )


def embed_into_partitioned(
    pattern: Hypergraph3,
    ph: PartitionedHypergraph,
    max_pattern_vertices: int | None = None,
    max_indices: int | None = None,
    max_part_size: int | None = None,
) -> PartitionedEmbedding | None:
    """Exhaustive search; the first embedding in index order is returned."""
    settings = get_settings()
    pattern_limit = settings.partitioned_max_pattern_vertices if max_pattern_vertices is None else max_pattern_vertices
    index_limit = settings.partitioned_max_indices if max_indices is None else max_indices
    part_limit = settings.partitioned_max_part_size if max_part_size is None else max_part_size
    if pattern.n > pattern_limit:
        raise SearchBoundExceededError("partitioned embedding pattern vertex count", pattern_limit, pattern.n)
    if ph.n > index_limit:
        raise SearchBoundExceededError("partitioned host index count", index_limit, ph.n)
    largest = max(ph.part_sizes.values(), default=0)
    if largest > part_limit:
        raise SearchBoundExceededError("partitioned host part size", part_limit, largest)
    if pattern.n > ph.n:
        return None

    n = pattern.n
    # (u, v, w) choices per triad
    triad_choices: dict[Triad, list[tuple[int, int, int]]] = {}
    for triad, edges in ph.triad_edges().items():
        triad_choices[triad] = [edge[3:] for edge in edges]  # type: ignore[misc]
    closing: list[list[Edge]] = [[] for _ in range(n)]
    for edge in pattern.sorted_edges():
        closing[edge[2]].append(edge)

    indices = [-1] * n
    used = [False] * ph.n
    chosen: dict[Pair, int] = {}

    def cover(edges: list[Edge], position: int, depth: int) -> bool:
        if position == len(edges):
            return place(depth + 1)
        edge = edges[position]
        x, y, z = sorted(edge, key=lambda vertex: indices[vertex])
        slots = ((min(x, y), max(x, y)), (min(x, z), max(x, z)), (min(y, z), max(y, z)))
        triad = (indices[x], indices[y], indices[z])
        for choice in triad_choices.get(triad, []):
            fresh: list[Pair] = []
            fits = True
            for pair, vertex in zip(slots, choice):
                current = chosen.get(pair)
                if current is None:
                    chosen[pair] = vertex
                    fresh.append(pair)
                elif current != vertex:
                    fits = False
                    break
            if fits and cover(edges, position + 1, depth):
                return True
            for pair in fresh:
                del chosen[pair]
        return False

    def place(depth: int) -> bool:
        if depth == n:
            return True
        for a in range(ph.n):
            if used[a]:
                continue
            if any(ph.size(a, indices[s]) == 0 for s in range(depth)):
                continue
            indices[depth] = a
            used[a] = True
            if cover(closing[depth], 0, depth):
                return True
            used[a] = False
            indices[depth] = -1
        return False

    if not place(0):
        return None
    vertices = {pair: chosen.get(pair, 0) for pair in combinations(range(n), 2)}
    return PartitionedEmbedding(indices=tuple(indices), pair_vertices=vertices)
