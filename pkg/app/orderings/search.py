"""Backtracking search for vanishing orderings.

Vertices are placed left to right, candidates in increasing label order, so
the first ordering found is the lexicographically least vanishing one. The
role of a covered pair is fully determined the moment its second endpoint is
placed: for pair (x, v) with v placed last and third vertex z of a common edge,
z still unplaced means left, z before x means right, and z between them means
top. A prefix is abandoned as soon as one pair receives two roles.
"""

from __future__ import annotations

from collections.abc import Sequence

import structlog

from app.config.settings import get_settings
from app.core.exceptions import SearchBoundExceededError
from app.hypergraphs.hypergraph import Hypergraph3, Pair, pair_thirds
from app.models.schemas import Role, VanishingCertificate

logger = structlog.get_logger(__name__)

UNPLACED = -1

# (partner, pair, thirds) for every covered pair through a vertex
Partners = list[list[tuple[int, Pair, tuple[int, ...]]]]


def partner_table(h: Hypergraph3) -> Partners:
    table: Partners = [[] for _ in range(h.n)]
    for pair, thirds in sorted(pair_thirds(h).items()):
        u, v = pair
        table[u].append((v, pair, tuple(thirds)))
        table[v].append((u, pair, tuple(thirds)))
    return table


def forced_role(x: int, thirds: Sequence[int], position: Sequence[int]) -> Role | None:
    """Role of pair (x, v) when v is the vertex being placed now; None if the edges disagree."""
    role: Role | None = None
    px = position[x]
    for z in thirds:
        pz = position[z]
        if pz == UNPLACED:
            current = Role.left
        elif pz < px:
            current = Role.right
        else:
            current = Role.top
        if role is None:
            role = current
        elif role is not current:
            return None
    return role


def find_vanishing_ordering(h: Hypergraph3, max_vertices: int | None = None) -> VanishingCertificate | None:
    """Return the lexicographically least vanishing ordering with its roles, or None."""
    limit = get_settings().ordering_max_vertices if max_vertices is None else max_vertices
    if h.n > limit:
        raise SearchBoundExceededError("vanishing ordering search vertex count", limit, h.n)

    n = h.n
    partners = partner_table(h)
    position = [UNPLACED] * n
    ordering: list[int] = []
    roles: dict[Pair, Role] = {}
    nodes = 0

    def place(depth: int) -> bool:
        nonlocal nodes
        if depth == n:
            return True
        for v in range(n):
            if position[v] != UNPLACED:
                continue
            nodes += 1
            position[v] = depth
            assigned: list[Pair] = []
            consistent = True
            for x, pair, thirds in partners[v]:
                if position[x] == UNPLACED or position[x] == depth:
                    continue
                role = forced_role(x, thirds, position)
                if role is None:
                    consistent = False
                    break
                roles[pair] = role
                assigned.append(pair)
            if consistent:
                ordering.append(v)
                if place(depth + 1):
                    return True
                ordering.pop()
            for pair in assigned:
                del roles[pair]
            position[v] = UNPLACED
        return False

    found = place(0)
    logger.debug("vanishing_search_completed", n=n, edges=h.edge_count, found=found, nodes=nodes)
    if not found:
        return None
    return VanishingCertificate(ordering=list(ordering), roles=dict(sorted(roles.items())))
