"""Partitioned hypergraphs: vertex parts V_ij for index pairs i < j, edges inside triads.

Indices are 0-based. A vertex is addressed as (i, j, u): the u-th vertex of
V_ij. An edge of the (i, j, k)-triad is stored as (i, j, k, u, v, w) with
u in V_ij, v in V_ik and w in V_jk.
"""

from __future__ import annotations

from collections import defaultdict
from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from pathlib import Path

import structlog

from app.core.exceptions import PartitionedHypergraphError
from app.hypergraphs.hypergraph import Pair

logger = structlog.get_logger(__name__)

Triad = tuple[int, int, int]
TriadEdge = tuple[int, int, int, int, int, int]
PartVertex = tuple[int, int, int]


def triad_parts(triad: Triad) -> tuple[Pair, Pair, Pair]:
    i, j, k = triad
    return (i, j), (i, k), (j, k)


def edge_vertices(edge: TriadEdge) -> tuple[PartVertex, PartVertex, PartVertex]:
    i, j, k, u, v, w = edge
    return (i, j, u), (i, k, v), (j, k, w)


@dataclass(frozen=True, slots=True)
class PartitionedHypergraph:
    n: int
    part_sizes: Mapping[Pair, int]
    edges: frozenset[TriadEdge]

    def __post_init__(self) -> None:
        if self.n < 0:
            raise PartitionedHypergraphError("index count must be non-negative")
        expected = set(combinations(range(self.n), 2))
        if set(self.part_sizes) != expected:
            raise PartitionedHypergraphError(f"part sizes must be given for exactly the pairs of 0..{self.n - 1}")
        if any(size < 0 for size in self.part_sizes.values()):
            raise PartitionedHypergraphError("part sizes must be non-negative")
        for edge in self.edges:
            i, j, k = edge[:3]
            if not 0 <= i < j < k < self.n:
                raise PartitionedHypergraphError(f"edge {edge} does not name a triad i < j < k below {self.n}")
            for (a, b, index) in edge_vertices(edge):
                if not 0 <= index < self.part_sizes[(a, b)]:
                    raise PartitionedHypergraphError(f"edge {edge} uses vertex {index} outside V_{a}{b}")

    @classmethod
    def create(cls, n: int, part_sizes: Mapping[Pair, int] | int, edges: Iterable[Iterable[int]] = ()) -> "PartitionedHypergraph":
        """Build from a size map (or one size for every part) and 6-tuples (i, j, k, u, v, w)."""
        if isinstance(part_sizes, int):
            sizes = {pair: part_sizes for pair in combinations(range(n), 2)}
        else:
            sizes = dict(part_sizes)
        normalized: set[TriadEdge] = set()
        for raw in edges:
            edge = tuple(int(x) for x in raw)
            if len(edge) != 6:
                raise PartitionedHypergraphError(f"triad edge {edge} must have 6 entries")
            if edge in normalized:
                raise PartitionedHypergraphError(f"duplicate triad edge {edge}")
            normalized.add(edge)  # type: ignore[arg-type]
        return cls(n=n, part_sizes=sizes, edges=frozenset(normalized))

    def size(self, a: int, b: int) -> int:
        return self.part_sizes[(a, b) if a < b else (b, a)]

    def triads(self) -> list[Triad]:
        return list(combinations(range(self.n), 3))  # type: ignore[arg-type]

    def triad_edges(self) -> dict[Triad, list[TriadEdge]]:
        grouped: dict[Triad, list[TriadEdge]] = defaultdict(list)
        for edge in sorted(self.edges):
            grouped[edge[:3]].append(edge)  # type: ignore[index]
        return grouped


@dataclass(frozen=True, slots=True)
class TriadStats:
    """Exact triad densities; triads with an empty part count as 0 and are listed in ``empty_triads``."""

    densities: dict[Triad, Fraction]
    minimum: Fraction | None
    empty_triads: tuple[Triad, ...]


def triad_stats(ph: PartitionedHypergraph) -> TriadStats:
    grouped = ph.triad_edges()
    densities: dict[Triad, Fraction] = {}
    empty: list[Triad] = []
    for triad in ph.triads():
        volume = 1
        for a, b in triad_parts(triad):
            volume *= ph.size(a, b)
        if volume == 0:
            empty.append(triad)
            densities[triad] = Fraction(0)
            continue
        densities[triad] = Fraction(len(grouped.get(triad, [])), volume)
    if empty:
        logger.warning("triads_with_empty_part", count=len(empty), first=empty[0])
    minimum = min(densities.values()) if densities else None
    return TriadStats(densities=densities, minimum=minimum, empty_triads=tuple(empty))


def _check_triad_vertex(ph: PartitionedHypergraph, triad: Triad, vertex: PartVertex) -> Pair:
    i, j, k = triad
    if not 0 <= i < j < k < ph.n:
        raise PartitionedHypergraphError(f"{triad} is not a triad of a {ph.n}-partitioned hypergraph")
    a, b, index = vertex
    part = (a, b)
    if part not in triad_parts(triad):
        raise PartitionedHypergraphError(f"vertex {vertex} is not in a part of triad {triad}")
    if not 0 <= index < ph.size(a, b):
        raise PartitionedHypergraphError(f"vertex index {index} outside V_{a}{b}")
    return part


def part_vertex_degree(ph: PartitionedHypergraph, triad: Triad, vertex: PartVertex) -> Fraction:
    """Triad edges through the vertex over the product of the two opposite part sizes."""
    part = _check_triad_vertex(ph, triad, vertex)
    others = [p for p in triad_parts(triad) if p != part]
    volume = ph.size(*others[0]) * ph.size(*others[1])
    if volume == 0:
        raise PartitionedHypergraphError(f"opposite parts of {vertex} in triad {triad} include an empty part")
    through = sum(1 for edge in ph.triad_edges().get(triad, []) if vertex in edge_vertices(edge))
    return Fraction(through, volume)


def pair_codegree(ph: PartitionedHypergraph, triad: Triad, first: PartVertex, second: PartVertex) -> Fraction:
    """Triad edges through both vertices over the size of the third part."""
    part1 = _check_triad_vertex(ph, triad, first)
    part2 = _check_triad_vertex(ph, triad, second)
    if part1 == part2:
        raise PartitionedHypergraphError(f"vertices {first} and {second} lie in the same part")
    (third,) = (p for p in triad_parts(triad) if p not in (part1, part2))
    size = ph.size(*third)
    if size == 0:
        raise PartitionedHypergraphError(f"third part V_{third[0]}{third[1]} of triad {triad} is empty")
    through = sum(
        1
        for edge in ph.triad_edges().get(triad, [])
        if first in edge_vertices(edge) and second in edge_vertices(edge)
    )
    return Fraction(through, size)


def reverse_partitioned(ph: PartitionedHypergraph) -> PartitionedHypergraph:
    """Same vertices and edges with parts re-indexed by V'_ij = V_{n-1-j, n-1-i}."""
    last = ph.n - 1
    sizes = {(i, j): ph.size(last - j, last - i) for i, j in combinations(range(ph.n), 2)}
    edges = frozenset((last - k, last - j, last - i, w, v, u) for i, j, k, u, v, w in ph.edges)
    return PartitionedHypergraph(n=ph.n, part_sizes=sizes, edges=edges)


def induced_partitioned(ph: PartitionedHypergraph, indices: Iterable[int]) -> PartitionedHypergraph:
    """Subhypergraph induced by an index set, re-indexed 0..|I|-1 in increasing order."""
    chosen = sorted(set(indices))
    if any(not 0 <= index < ph.n for index in chosen):
        raise PartitionedHypergraphError(f"index set {chosen} is not inside 0..{ph.n - 1}")
    new_index = {old: new for new, old in enumerate(chosen)}
    sizes = {(new_index[a], new_index[b]): ph.size(a, b) for a, b in combinations(chosen, 2)}
    edges = frozenset(
        (new_index[i], new_index[j], new_index[k], u, v, w)
        for i, j, k, u, v, w in ph.edges
        if i in new_index and j in new_index and k in new_index
    )
    return PartitionedHypergraph(n=len(chosen), part_sizes=sizes, edges=edges)


def serialize_partitioned(ph: PartitionedHypergraph) -> str:
    """Header "P n", an n x n symmetric part-size matrix, then lines "i j u  i k v  j k w"."""
    lines = [f"P {ph.n}"]
    for a in range(ph.n):
        lines.append(" ".join(str(0 if a == b else ph.size(a, b)) for b in range(ph.n)))
    for i, j, k, u, v, w in sorted(ph.edges):
        lines.append(f"{i} {j} {u}  {i} {k} {v}  {j} {k} {w}")
    return "\n".join(lines)


def parse_partitioned(text: str) -> PartitionedHypergraph:
    rows = [
        (number, line.split())
        for number, line in enumerate(text.splitlines(), start=1)
        if line.strip() and not line.lstrip().startswith("#")
    ]
    if not rows or len(rows[0][1]) != 2 or rows[0][1][0] != "P":
        raise PartitionedHypergraphError("line 1: expected header 'P n'")
    try:
        n = int(rows[0][1][1])
        matrix = [[int(x) for x in tokens] for _, tokens in rows[1 : n + 1]]
        edge_rows = [(number, [int(x) for x in tokens]) for number, tokens in rows[n + 1 :]]
    except ValueError as exc:
        raise PartitionedHypergraphError(f"non-integer token: {exc}") from exc
    if len(matrix) != n or any(len(row) != n for row in matrix):
        raise PartitionedHypergraphError(f"part-size matrix must be {n} x {n}")
    sizes: dict[Pair, int] = {}
    for a, b in combinations(range(n), 2):
        if matrix[a][b] != matrix[b][a]:
            raise PartitionedHypergraphError(f"part-size matrix is not symmetric at ({a}, {b})")
        sizes[(a, b)] = matrix[a][b]
    edges = []
    for number, values in edge_rows:
        if len(values) != 9:
            raise PartitionedHypergraphError(f"line {number}: edge line needs 9 integers")
        i, j, u, i2, k, v, j2, k2, w = values
        if i != i2 or j != j2 or k != k2:
            raise PartitionedHypergraphError(f"line {number}: parts do not form one triad")
        edges.append((i, j, k, u, v, w))
    return PartitionedHypergraph.create(n, sizes, edges)


def read_partitioned(path: Path) -> PartitionedHypergraph:
    try:
        return parse_partitioned(path.read_text(encoding="ascii"))
    except OSError as exc:
        raise PartitionedHypergraphError(f"cannot read {path}: {exc}") from exc
