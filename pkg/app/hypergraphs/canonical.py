"""Canonical forms, automorphisms and isomorphism tests for small 3-graphs.

Edge sets are bit sets: bit ``r`` is set when the triple of lexicographic rank
``r`` among all C(n, 3) triples is an edge. The canonical encoding is the
minimum bit set over all relabelings that respect an isomorphism-invariant
vertex partition (degree, refined by the colors of edge partners).
"""

from __future__ import annotations

import threading
from collections import defaultdict, deque
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, permutations, product
from math import factorial

from cachetools import LRUCache

from app.config.settings import get_settings
from app.core.exceptions import SearchBoundExceededError
from app.hypergraphs.hypergraph import Edge, Hypergraph3, edges_by_vertex

Permutation = tuple[int, ...]


@lru_cache(maxsize=None)
def triple_table(n: int) -> tuple[tuple[int, ...], tuple[Edge, ...]]:
    """Return (rank lookup indexed by (x*n + y)*n + z for any order, triples by rank)."""
    triples = tuple(combinations(range(n), 3))
    lookup = [-1] * (n * n * n)
    for rank, triple in enumerate(triples):
        for x, y, z in permutations(triple):
            lookup[(x * n + y) * n + z] = rank
    return tuple(lookup), triples  # type: ignore[return-value]


def edge_mask(h: Hypergraph3) -> int:
    lookup, _ = triple_table(h.n)
    n = h.n
    mask = 0
    for a, b, c in h.edges:
        mask |= 1 << lookup[(a * n + b) * n + c]
    return mask


def graph_from_mask(n: int, mask: int) -> Hypergraph3:
    _, triples = triple_table(n)
    edges = [triple for rank, triple in enumerate(triples) if mask >> rank & 1]
    return Hypergraph3(n=n, edges=frozenset(edges))


@dataclass(frozen=True, slots=True)
class CanonicalForm:
    """Isomorphism-invariant encoding plus one canonical labeling of the input.

    Two forms compare equal exactly when their inputs are isomorphic; the
    labeling and automorphism fields describe the particular input and are
    excluded from comparison.
    """

    n: int
    encoding: int
    automorphism_count: int
    labeling: Permutation = field(compare=False)
    automorphisms: tuple[Permutation, ...] = field(compare=False, repr=False)
    isolated: tuple[int, ...] = field(compare=False, repr=False)

    @property
    def key(self) -> str:
        return f"{self.n}:{self.encoding:x}"

    def representative(self) -> Hypergraph3:
        return graph_from_mask(self.n, self.encoding)

    def generators(self) -> list[Permutation]:
        """Generators of the full automorphism group of the input."""
        gens = list(self.automorphisms)
        for left, right in zip(self.isolated, self.isolated[1:]):
            swap = list(range(self.n))
            swap[left], swap[right] = right, left
            gens.append(tuple(swap))
        return gens


def _rank(values: Sequence) -> list[int]:
    index = {value: position for position, value in enumerate(sorted(set(values)))}
    return [index[value] for value in values]


def vertex_colors(h: Hypergraph3) -> list[int]:
    """Iteratively refined vertex invariant; ranks are isomorphism-invariant."""
    incident = edges_by_vertex(h)
    colors = _rank(h.degrees())
    count = len(set(colors))
    while True:
        signatures = []
        for v in range(h.n):
            partners = []
            for edge in incident[v]:
                x, y = (colors[u] for u in edge if u != v)
                partners.append((x, y) if x <= y else (y, x))
            partners.sort()
            signatures.append((colors[v], tuple(partners)))
        refined = _rank(signatures)
        refined_count = len(set(refined))
        if refined_count == count:
            return refined
        colors, count = refined, refined_count


def _cell_labelings(colors: list[int], skip: set[int]) -> Iterator[list[int]]:
    """Yield every labeling that sends each vertex into its color's position block.

    Vertices in ``skip`` keep a fixed slot; they are interchangeable by assumption.
    """
    n = len(colors)
    cells: dict[int, list[int]] = defaultdict(list)
    for v, color in enumerate(colors):
        cells[color].append(v)

    fixed = [0] * n
    varying: list[tuple[list[int], list[tuple[int, ...]]]] = []
    start = 0
    for color in sorted(cells):
        members = cells[color]
        positions = list(range(start, start + len(members)))
        start += len(members)
        free = [v for v in members if v not in skip]
        pinned = [v for v in members if v in skip]
        for v, p in zip(pinned, positions):
            fixed[v] = p
        free_positions = positions[len(pinned):]
        if len(free) == 1:
            fixed[free[0]] = free_positions[0]
        elif free:
            varying.append((free, list(permutations(free_positions))))

    for choice in product(*(options for _, options in varying)):
        labeling = fixed[:]
        for (members, _), positions in zip(varying, choice):
            for v, p in zip(members, positions):
                labeling[v] = p
        yield labeling


class CanonicalLabeler:
    """Brute-force minimum-image canonical labeling with an LRU memo."""

    def __init__(self, max_vertices: int, cache_size: int) -> None:
        self._max_vertices = max_vertices
        self._cache: LRUCache = LRUCache(maxsize=cache_size)
        self._lock = threading.Lock()

    def canonical_form(self, h: Hypergraph3, max_vertices: int | None = None) -> CanonicalForm:
        limit = self._max_vertices if max_vertices is None else max_vertices
        if h.n > limit:
            raise SearchBoundExceededError("canonical form vertex count", limit, h.n)
        with self._lock:
            cached = self._cache.get(h)
        if cached is not None:
            return cached
        form = self._compute(h)
        with self._lock:
            self._cache[h] = form
        return form

    def _compute(self, h: Hypergraph3) -> CanonicalForm:
        n = h.n
        lookup, _ = triple_table(n)
        edges = h.sorted_edges()
        colors = vertex_colors(h)
        isolated = tuple(h.isolated_vertices())

        best: int | None = None
        minimizers: list[list[int]] = []
        for labeling in _cell_labelings(colors, set(isolated)):
            mask = 0
            for a, b, c in edges:
                mask |= 1 << lookup[(labeling[a] * n + labeling[b]) * n + labeling[c]]
            if best is None or mask < best:
                best = mask
                minimizers = [labeling]
            elif mask == best:
                minimizers.append(labeling)

        base = minimizers[0]
        inverse = [0] * n
        for v, p in enumerate(base):
            inverse[p] = v
        automorphisms = tuple(tuple(inverse[lab[v]] for v in range(n)) for lab in minimizers)
        return CanonicalForm(
            n=n,
            encoding=best or 0,
            automorphism_count=len(minimizers) * factorial(len(isolated)),
            labeling=tuple(base),
            automorphisms=automorphisms,
            isolated=isolated,
        )


_default_labeler: CanonicalLabeler | None = None


def _labeler() -> CanonicalLabeler:
    global _default_labeler
    if _default_labeler is None:
        settings = get_settings()
        _default_labeler = CanonicalLabeler(
            max_vertices=settings.canonical_max_vertices,
            cache_size=settings.canonical_cache_size,
        )
    return _default_labeler


def canonical_form(h: Hypergraph3, max_vertices: int | None = None) -> CanonicalForm:
    """Isomorphism-invariant form of ``h``; deterministic and relabeling-stable."""
    return _labeler().canonical_form(h, max_vertices=max_vertices)


def canonical_representative(h: Hypergraph3, max_vertices: int | None = None) -> Hypergraph3:
    return canonical_form(h, max_vertices=max_vertices).representative()


def are_isomorphic(h1: Hypergraph3, h2: Hypergraph3, max_vertices: int | None = None) -> bool:
    """True iff some vertex bijection maps the edges of h1 onto the edges of h2."""
    if h1.n != h2.n or h1.edge_count != h2.edge_count:
        return False
    if sorted(h1.degrees()) != sorted(h2.degrees()):
        return False
    return canonical_form(h1, max_vertices) == canonical_form(h2, max_vertices)


def orbit(triple: Edge, generators: Iterable[Permutation]) -> set[Edge]:
    """Orbit of a vertex triple under the group generated by ``generators``."""
    gens = list(generators)
    start: Edge = tuple(sorted(triple))  # type: ignore[assignment]
    seen = {start}
    queue = deque([start])
    while queue:
        a, b, c = queue.popleft()
        for g in gens:
            image: Edge = tuple(sorted((g[a], g[b], g[c])))  # type: ignore[assignment]
            if image not in seen:
                seen.add(image)
                queue.append(image)
    return seen
