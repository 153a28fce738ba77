"""Isomorph-free generation of 3-graphs by canonical edge augmentation.

A child G+e is kept only when e lies in the automorphism orbit of the child's
canonical deletion edge, so every isomorphism class is reached from exactly
one parent class. Children are tried once per automorphism orbit of non-edges.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator
from math import comb

from app.config.settings import get_settings
from app.core.exceptions import InvalidHypergraphError, SearchBoundExceededError
from app.hypergraphs.canonical import CanonicalForm, canonical_form, orbit, triple_table
from app.hypergraphs.hypergraph import Edge, Hypergraph3


def canonical_deletion_edge(form: CanonicalForm) -> Edge:
    """Pull back the highest-ranked edge of the canonical representative."""
    _, triples = triple_table(form.n)
    top_rank = form.encoding.bit_length() - 1
    inverse = [0] * form.n
    for v, p in enumerate(form.labeling):
        inverse[p] = v
    edge = triples[top_rank]
    return tuple(sorted(inverse[p] for p in edge))  # type: ignore[return-value]


def augmentations(h: Hypergraph3, form: CanonicalForm | None = None) -> Iterator[tuple[Hypergraph3, CanonicalForm]]:
    """Accepted one-edge extensions of ``h`` with their canonical forms, in triple order."""
    form = form or canonical_form(h)
    generators = form.generators()
    _, triples = triple_table(h.n)
    tried: set[Edge] = set()
    for triple in triples:
        if triple in h.edges or triple in tried:
            continue
        tried |= orbit(triple, generators)
        child = Hypergraph3(n=h.n, edges=h.edges | {triple})
        child_form = canonical_form(child)
        deletion = canonical_deletion_edge(child_form)
        if triple == deletion or triple in orbit(deletion, child_form.generators()):
            yield child, child_form


class IsomorphFreeEnumerator:
    """Depth-first canonical augmentation from the empty graph.

    Each yielded graph is the canonical representative of its class. The
    remaining stack is exposed through ``cursor`` so a run can be resumed.
    """

    def __init__(self, n: int, max_edges: int | None = None, cursor: Iterable[Iterable[Edge]] | None = None) -> None:
        limit = get_settings().canonical_max_vertices
        if n > limit:
            raise SearchBoundExceededError("enumeration vertex count", limit, n)
        total = comb(n, 3)
        if max_edges is None:
            max_edges = total
        if not 0 <= max_edges <= total:
            raise InvalidHypergraphError(f"max_edges must lie in 0..{total}, got {max_edges}")
        self.n = n
        self.max_edges = max_edges
        if cursor is None:
            self._stack = [Hypergraph3(n=n, edges=frozenset())]
        else:
            self._stack = [Hypergraph3.from_edges(n, edges) for edges in cursor]

    def cursor(self) -> list[list[Edge]]:
        return [graph.sorted_edges() for graph in self._stack]

    def __iter__(self) -> Iterator[Hypergraph3]:
        while self._stack:
            graph = self._stack.pop()
            if graph.edge_count < self.max_edges:
                children = [child_form.representative() for _, child_form in augmentations(graph)]
                self._stack.extend(reversed(children))
            yield graph


def enumerate_nonisomorphic(n: int, max_edges: int | None = None) -> Iterator[Hypergraph3]:
    """One canonical representative per isomorphism class with at most ``max_edges`` edges."""
    return iter(IsomorphFreeEnumerator(n, max_edges))
