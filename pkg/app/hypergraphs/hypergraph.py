"""3-uniform hypergraph values and small structural helpers."""

from __future__ import annotations

from collections import defaultdict
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from itertools import combinations

from app.core.constants import VERTEX_LETTERS
from app.core.exceptions import InvalidHypergraphError

Edge = tuple[int, int, int]
Pair = tuple[int, int]


def make_pair(u: int, v: int) -> Pair:
    """Return the unordered pair {u, v} as a sorted tuple."""
    return (u, v) if u < v else (v, u)


def normalize_edge(members: Iterable[int]) -> Edge:
    """Sort three distinct vertices into an edge tuple."""
    vertices = tuple(sorted(int(v) for v in members))
    if len(vertices) != 3:
        raise InvalidHypergraphError(f"edge must have exactly 3 vertices, got {len(vertices)}")
    if len(set(vertices)) != 3:
        raise InvalidHypergraphError(f"repeated vertex inside edge {vertices}")
    return vertices  # type: ignore[return-value]


@dataclass(frozen=True, slots=True)
class Hypergraph3:
    """A 3-graph on vertices 0..n-1 with a duplicate-free edge set."""

    n: int
    edges: frozenset[Edge]

    def __post_init__(self) -> None:
        if self.n < 0:
            raise InvalidHypergraphError("vertex count must be non-negative")
        for edge in self.edges:
            if len(edge) != 3 or not edge[0] < edge[1] < edge[2]:
                raise InvalidHypergraphError(f"edge {edge} is not a sorted triple of distinct vertices")
            if edge[0] < 0 or edge[2] >= self.n:
                raise InvalidHypergraphError(f"edge {edge} has a vertex outside 0..{self.n - 1}")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Iterable[int]]) -> "Hypergraph3":
        """Build a hypergraph, rejecting duplicate edges instead of merging them."""
        normalized: set[Edge] = set()
        for raw in edges:
            edge = normalize_edge(raw)
            if edge in normalized:
                raise InvalidHypergraphError(f"duplicate edge {edge}")
            normalized.add(edge)
        return cls(n=n, edges=frozenset(normalized))

    @classmethod
    def from_letters(cls, n: int, words: str | Sequence[str]) -> "Hypergraph3":
        """Build from letter triples such as "abc, ade" with a, b, c ... mapped to 0, 1, 2 ..."""
        if isinstance(words, str):
            words = [word for word in words.replace(",", " ").split() if word]
        return cls.from_edges(n, ([VERTEX_LETTERS.index(ch) for ch in word] for word in words))

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges)

    def degrees(self) -> list[int]:
        counts = [0] * self.n
        for edge in self.edges:
            for v in edge:
                counts[v] += 1
        return counts

    def isolated_vertices(self) -> list[int]:
        return [v for v, degree in enumerate(self.degrees()) if degree == 0]

    def has_edge(self, members: Iterable[int]) -> bool:
        return tuple(sorted(members)) in self.edges

    def with_edge(self, members: Iterable[int]) -> "Hypergraph3":
        edge = normalize_edge(members)
        if edge in self.edges:
            raise InvalidHypergraphError(f"edge {edge} already present")
        return Hypergraph3(n=self.n, edges=self.edges | {edge})

    def subhypergraph(self, edges: Iterable[Edge]) -> "Hypergraph3":
        """Spanning subhypergraph on the same vertex set with the given edges."""
        chosen = frozenset(tuple(sorted(edge)) for edge in edges)
        missing = chosen - self.edges
        if missing:
            raise InvalidHypergraphError(f"edges {sorted(missing)} are not edges of the hypergraph")
        return Hypergraph3(n=self.n, edges=chosen)  # type: ignore[arg-type]

    def letters(self) -> str:
        """Render edges as letter words, the notation used for small examples."""
        return ", ".join("".join(VERTEX_LETTERS[v] for v in edge) for edge in self.sorted_edges())


def delete_edge(h: Hypergraph3, members: Iterable[int]) -> Hypergraph3:
    """Return h without the given edge; the vertex count is unchanged."""
    edge = tuple(sorted(members))
    if edge not in h.edges:
        raise InvalidHypergraphError(f"edge {edge} is not present")
    return Hypergraph3(n=h.n, edges=h.edges - {edge})  # type: ignore[operator]


def relabel(h: Hypergraph3, mapping: Sequence[int]) -> Hypergraph3:
    """Apply the vertex permutation v -> mapping[v]."""
    if sorted(mapping) != list(range(h.n)):
        raise InvalidHypergraphError("relabeling must be a permutation of the vertex set")
    return Hypergraph3(
        n=h.n,
        edges=frozenset(
            tuple(sorted((mapping[a], mapping[b], mapping[c])))  # type: ignore[misc]
            for a, b, c in h.edges
        ),
    )


def pair_thirds(h: Hypergraph3) -> dict[Pair, list[int]]:
    """Map every covered pair to the third vertices of the edges containing it."""
    thirds: dict[Pair, list[int]] = defaultdict(list)
    for a, b, c in h.edges:
        thirds[(a, b)].append(c)
        thirds[(a, c)].append(b)
        thirds[(b, c)].append(a)
    return dict(thirds)


def edges_by_vertex(h: Hypergraph3) -> list[list[Edge]]:
    incident: list[list[Edge]] = [[] for _ in range(h.n)]
    for edge in h.sorted_edges():
        for v in edge:
            incident[v].append(edge)
    return incident


def complete_hypergraph(n: int) -> Hypergraph3:
    """K_n^(3)."""
    return Hypergraph3(n=n, edges=frozenset(combinations(range(n), 3)))  # type: ignore[arg-type]


def tight_cycle(n: int) -> Hypergraph3:
    """Tight cycle with edges {i, i+1, i+2} taken modulo n."""
    return Hypergraph3.from_edges(n, ((i, (i + 1) % n, (i + 2) % n) for i in range(n)))
