"""Edge bipartitions with one ordering vanishing for both parts and fixed roles on shared pairs.

Horizontal mode wants every shared pair right in the first part and left in
the second; vertical mode wants it top in the first part and left in the
second. A pair is shared when it lies in an edge of each part.
"""

from __future__ import annotations

from collections.abc import Iterator, Sequence
from concurrent.futures import ProcessPoolExecutor
from itertools import combinations, islice

import structlog

from app.config.settings import get_settings
from app.core.exceptions import InvalidHypergraphError, SearchBoundExceededError
from app.hypergraphs.hypergraph import Edge, Hypergraph3, Pair
from app.models.schemas import BipartitionCertificate, IntersectionMode, Role, VanishingCertificate
from app.orderings.roles import verify_vanishing_certificate
from app.orderings.search import UNPLACED, forced_role, partner_table

logger = structlog.get_logger(__name__)

SPLIT_WINDOW_PER_JOB = 8

SHARED_ROLES: dict[IntersectionMode, tuple[Role, Role]] = {
    IntersectionMode.horizontal: (Role.right, Role.left),
    IntersectionMode.vertical: (Role.top, Role.left),
}


def enumerate_part1(edges: Sequence[Edge]) -> Iterator[tuple[Edge, ...]]:
    """First parts by increasing size, then lexicographically."""
    for size in range(len(edges) + 1):
        yield from combinations(edges, size)


def _search_split(
    n: int,
    part1: tuple[Edge, ...],
    part2: tuple[Edge, ...],
    mode: IntersectionMode,
) -> BipartitionCertificate | None:
    """Ordering search run on both parts at once; shared-pair roles are checked on placement."""
    h1 = Hypergraph3(n=n, edges=frozenset(part1))
    h2 = Hypergraph3(n=n, edges=frozenset(part2))
    partners1 = partner_table(h1)
    partners2 = partner_table(h2)
    thirds1 = {pair: thirds for row in partners1 for _, pair, thirds in row}
    thirds2 = {pair: thirds for row in partners2 for _, pair, thirds in row}
    shared = set(thirds1) & set(thirds2)
    want1, want2 = SHARED_ROLES[mode]

    position = [UNPLACED] * n
    ordering: list[int] = []
    roles1: dict[Pair, Role] = {}
    roles2: dict[Pair, Role] = {}

    def assign(v: int, touched: list[Pair]) -> bool:
        for x in range(n):
            if position[x] == UNPLACED or x == v:
                continue
            pair = (x, v) if x < v else (v, x)
            role1 = role2 = None
            if pair in thirds1:
                role1 = forced_role(x, thirds1[pair], position)
                if role1 is None:
                    return False
            if pair in thirds2:
                role2 = forced_role(x, thirds2[pair], position)
                if role2 is None:
                    return False
            if pair in shared and (role1 is not want1 or role2 is not want2):
                return False
            if role1 is not None:
                roles1[pair] = role1
            if role2 is not None:
                roles2[pair] = role2
            touched.append(pair)
        return True

    def place(depth: int) -> bool:
        if depth == n:
            return True
        for v in range(n):
            if position[v] != UNPLACED:
                continue
            position[v] = depth
            touched: list[Pair] = []
            if assign(v, touched):
                ordering.append(v)
                if place(depth + 1):
                    return True
                ordering.pop()
            for pair in touched:
                roles1.pop(pair, None)
                roles2.pop(pair, None)
            position[v] = UNPLACED
        return False

    if not place(0):
        return None
    return BipartitionCertificate(
        mode=mode,
        part1=sorted(part1),
        part2=sorted(part2),
        ordering=list(ordering),
        roles1=dict(sorted(roles1.items())),
        roles2=dict(sorted(roles2.items())),
    )


def _search_split_task(args: tuple[int, tuple[Edge, ...], tuple[Edge, ...], IntersectionMode]) -> BipartitionCertificate | None:
    return _search_split(*args)


def find_bipartition_certificate(
    h: Hypergraph3,
    mode: IntersectionMode,
    max_vertices: int | None = None,
    jobs: int = 1,
) -> BipartitionCertificate | None:
    """Return the first certificate in bipartition order, or None when no split works."""
    limit = get_settings().certify_max_vertices if max_vertices is None else max_vertices
    if h.n > limit:
        raise SearchBoundExceededError("bipartition search vertex count", limit, h.n)

    edges = h.sorted_edges()
    tasks = (
        (h.n, part1, tuple(edge for edge in edges if edge not in part1), mode)
        for part1 in enumerate_part1(edges)
    )
    if jobs <= 1:
        for index, task in enumerate(tasks):
            cert = _search_split_task(task)
            if cert is not None:
                logger.debug("bipartition_found", mode=mode.value, split_index=index, part1_size=len(cert.part1))
                return cert
        return None

    # windows are scanned in submission order, so the first hit has the lowest index
    window_size = jobs * SPLIT_WINDOW_PER_JOB
    pool = ProcessPoolExecutor(max_workers=jobs)
    try:
        offset = 0
        while window := list(islice(tasks, window_size)):
            futures = [pool.submit(_search_split_task, task) for task in window]
            for index, future in enumerate(futures, start=offset):
                cert = future.result()
                if cert is not None:
                    logger.debug("bipartition_found", mode=mode.value, split_index=index, part1_size=len(cert.part1))
                    return cert
            offset += len(window)
    finally:
        pool.shutdown(wait=True, cancel_futures=True)
    return None


def _shared_pairs(part1: Sequence[Edge], part2: Sequence[Edge]) -> set[Pair]:
    shared: set[Pair] = set()
    for e1 in part1:
        for e2 in part2:
            common = sorted(set(e1) & set(e2))
            if len(common) == 2:
                shared.add((common[0], common[1]))
    return shared


def verify_bipartition_certificate(h: Hypergraph3, cert: BipartitionCertificate) -> bool:
    """Independent check: exact edge split, both orderings vanishing, shared pairs in the mode's roles."""
    try:
        part1 = [tuple(sorted(edge)) for edge in cert.part1]
        part2 = [tuple(sorted(edge)) for edge in cert.part2]
        h1 = Hypergraph3(n=h.n, edges=frozenset(part1))  # type: ignore[arg-type]
        h2 = Hypergraph3(n=h.n, edges=frozenset(part2))  # type: ignore[arg-type]
    except InvalidHypergraphError:
        return False
    if len(h1.edges) != len(part1) or len(h2.edges) != len(part2):
        return False
    if h1.edges & h2.edges or h1.edges | h2.edges != h.edges:
        return False
    if not verify_vanishing_certificate(h1, VanishingCertificate(ordering=cert.ordering, roles=cert.roles1)):
        return False
    if not verify_vanishing_certificate(h2, VanishingCertificate(ordering=cert.ordering, roles=cert.roles2)):
        return False
    want1, want2 = SHARED_ROLES[cert.mode]
    return all(
        cert.roles1.get(pair) is want1 and cert.roles2.get(pair) is want2
        for pair in _shared_pairs(part1, part2)  # type: ignore[arg-type]
    )


def mirror_certificate(cert: BipartitionCertificate) -> BipartitionCertificate:
    """Reverse the ordering, swap left and right, and exchange the parts.

    A horizontal certificate maps to another horizontal certificate of the
    same 3-graph: shared pairs that were right in the first part become left
    there, and the parts trade places.
    """
    swap = {Role.left: Role.right, Role.right: Role.left, Role.top: Role.top}
    return BipartitionCertificate(
        mode=cert.mode,
        part1=list(cert.part2),
        part2=list(cert.part1),
        ordering=list(reversed(cert.ordering)),
        roles1={pair: swap[role] for pair, role in cert.roles2.items()},
        roles2={pair: swap[role] for pair, role in cert.roles1.items()},
    )
