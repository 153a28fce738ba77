"""Explicit 3-graphs with density exactly 1/27 and their hand-derived certificates.

No search is involved: orderings come from the known constructions and roles
are read off with ``roles_under_ordering``, so ``build_example8`` works for
any k.
"""

from __future__ import annotations

from collections.abc import Sequence

from app.certify.turan import nonvanishing_verdict
from app.core.exceptions import InvalidHypergraphError
from app.hypergraphs.hypergraph import Edge, Hypergraph3
from app.models.schemas import BipartitionCertificate, IntersectionMode, TuranCertificate
from app.orderings.roles import RoleConflict, roles_under_ordering

EXAMPLE9_EDGES = "abc, ade, bcd, bcf, cde, def, abg, cdg, efg"
EXAMPLE9_PART1 = "abg"
EXAMPLE9_HORIZONTAL = "egbdfac"
EXAMPLE9_VERTICAL = "ebgdfac"


def _letters_to_vertices(word: str) -> list[int]:
    return [ord(ch) - ord("a") for ch in word]


def _bipartition(
    h: Hypergraph3,
    part1: Sequence[Edge],
    ordering: Sequence[int],
    mode: IntersectionMode,
) -> BipartitionCertificate:
    h1 = h.subhypergraph(part1)
    h2 = h.subhypergraph(h.edges - set(part1))
    roles1 = roles_under_ordering(h1, ordering)
    roles2 = roles_under_ordering(h2, ordering)
    if isinstance(roles1, RoleConflict) or isinstance(roles2, RoleConflict):
        raise InvalidHypergraphError(f"ordering {list(ordering)} is not vanishing for both parts")
    return BipartitionCertificate(
        mode=mode,
        part1=h1.sorted_edges(),
        part2=h2.sorted_edges(),
        ordering=list(ordering),
        roles1=roles1,
        roles2=roles2,
    )


def _certificate(
    h: Hypergraph3,
    part1: Sequence[Edge],
    horizontal: Sequence[int],
    vertical: Sequence[int],
) -> TuranCertificate:
    return TuranCertificate(
        nonvanishing=nonvanishing_verdict(h),
        horizontal=_bipartition(h, part1, horizontal, IntersectionMode.horizontal),
        vertical=_bipartition(h, part1, vertical, IntersectionMode.vertical),
    )


def example9_hypergraph() -> Hypergraph3:
    return Hypergraph3.from_letters(7, EXAMPLE9_EDGES)


def build_example9() -> tuple[Hypergraph3, TuranCertificate]:
    """The 7-vertex 9-edge 3-graph on a..g; the first part is the single edge abg."""
    h = example9_hypergraph()
    part1 = [tuple(_letters_to_vertices(EXAMPLE9_PART1))]
    cert = _certificate(
        h,
        part1,  # type: ignore[arg-type]
        _letters_to_vertices(EXAMPLE9_HORIZONTAL),
        _letters_to_vertices(EXAMPLE9_VERTICAL),
    )
    return h, cert


class Example8Labels:
    """Vertex numbering of H^k: a=0, b=1, then the c, d and e chains of length k+1."""

    def __init__(self, k: int) -> None:
        self.k = k
        self.a = 0
        self.b = 1

    @property
    def n(self) -> int:
        return 5 + 3 * self.k

    def chain(self, name: str) -> list[int]:
        offset = 2 + "cde".index(name) * (self.k + 1)
        return list(range(offset, offset + self.k + 1))

    def vertex(self, name: str, index: int) -> int:
        return self.chain(name)[index]

    def residue(self, v: int) -> int:
        """Chain index mod 3, with a and b taking indices -2 and -1."""
        if v == self.a:
            return -2 % 3
        if v == self.b:
            return -1 % 3
        return (v - 2) % (self.k + 1) % 3


def example8_hypergraph(k: int) -> Hypergraph3:
    if k < 1:
        raise InvalidHypergraphError(f"H^k needs k >= 1, got {k}")
    labels = Example8Labels(k)
    edges: list[tuple[int, int, int]] = []
    for name, successor in (("c", "d"), ("d", "e"), ("e", "c")):
        x = labels.chain(name)
        edges.append((labels.a, labels.b, x[0]))
        edges.append((labels.b, x[0], x[1]))
        edges.extend((x[i], x[i + 1], x[i + 2]) for i in range(k - 1))
        edges.append((x[k - 1], x[k], labels.vertex(successor, k)))
    return Hypergraph3.from_edges(labels.n, edges)


def example8_orderings(k: int) -> tuple[list[int], list[int]]:
    """Horizontal and vertical orderings built from the residue blocks A, B and C.

    Inside a block vertices follow the c chain, then d, then e, by increasing
    index, then a and b.
    """
    labels = Example8Labels(k)
    block_order = labels.chain("c") + labels.chain("d") + labels.chain("e") + [labels.a, labels.b]
    c_k, d_k = labels.vertex("c", k), labels.vertex("d", k)
    e_prev = labels.vertex("e", k - 1)

    def block(residue: int, exclude: set[int]) -> list[int]:
        return [v for v in block_order if labels.residue(v) == residue % 3 and v not in exclude]

    a_block = block(k - 1, set())
    b_block = block(k, {c_k, d_k})
    c_block = block(k + 1, set())
    horizontal = [v for v in a_block if v != e_prev] + [c_k, e_prev, d_k] + b_block + c_block
    vertical = a_block + [c_k, d_k] + b_block + c_block
    return horizontal, vertical


def build_example8(k: int) -> tuple[Hypergraph3, TuranCertificate]:
    """H^k on 5+3k vertices with 3(k+2) edges; the first part is the single edge e_{k-1} e_k c_k."""
    h = example8_hypergraph(k)
    labels = Example8Labels(k)
    part1 = [tuple(sorted((labels.vertex("e", k - 1), labels.vertex("e", k), labels.vertex("c", k))))]
    horizontal, vertical = example8_orderings(k)
    return h, _certificate(h, part1, horizontal, vertical)  # type: ignore[arg-type]
