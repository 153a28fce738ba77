"""Left/top/right roles forced on covered pairs by a fixed vertex ordering."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

from app.core.exceptions import InvalidOrderingError
from app.hypergraphs.hypergraph import Hypergraph3, Pair
from app.models.schemas import Role, VanishingCertificate

RoleMap = dict[Pair, Role]


@dataclass(frozen=True, slots=True)
class RoleConflict:
    """First pair (by labels) forced into two different roles, plus every conflicting pair."""

    pair: Pair
    roles: tuple[Role, Role]
    conflicts: tuple[Pair, ...]


def ordering_positions(ordering: Sequence[int], n: int) -> list[int]:
    """Return position[v] for each vertex; raise unless ordering permutes 0..n-1."""
    if len(ordering) != n or sorted(ordering) != list(range(n)):
        raise InvalidOrderingError(f"ordering {list(ordering)} is not a permutation of 0..{n - 1}")
    position = [0] * n
    for index, v in enumerate(ordering):
        position[v] = index
    return position


def edge_roles(edge: Sequence[int], position: Sequence[int]) -> tuple[tuple[Pair, Role], ...]:
    """Roles of the three pairs of one edge: (first, second) left, (first, third) top, (second, third) right."""
    i, j, k = sorted(edge, key=position.__getitem__)
    return (
        ((min(i, j), max(i, j)), Role.left),
        ((min(i, k), max(i, k)), Role.top),
        ((min(j, k), max(j, k)), Role.right),
    )


def roles_under_ordering(h: Hypergraph3, ordering: Sequence[int]) -> RoleMap | RoleConflict:
    """Force roles edge by edge; return the assignment or the first conflict."""
    position = ordering_positions(ordering, h.n)
    forced: dict[Pair, list[Role]] = {}
    for edge in h.sorted_edges():
        for pair, role in edge_roles(edge, position):
            seen = forced.setdefault(pair, [])
            if role not in seen:
                seen.append(role)

    conflicts = tuple(sorted(pair for pair, roles in forced.items() if len(roles) > 1))
    if conflicts:
        first = conflicts[0]
        return RoleConflict(pair=first, roles=(forced[first][0], forced[first][1]), conflicts=conflicts)
    return {pair: roles[0] for pair, roles in sorted(forced.items())}


def verify_vanishing_certificate(h: Hypergraph3, cert: VanishingCertificate) -> bool:
    """True iff the ordering is vanishing and the stated roles are exactly the forced ones."""
    try:
        forced = roles_under_ordering(h, cert.ordering)
    except InvalidOrderingError:
        return False
    if isinstance(forced, RoleConflict):
        return False
    return cert.roles == forced
