"""Unit tests for roles, the vanishing ordering search and the digraph oracle."""

import random
from itertools import combinations, permutations

import pytest

from app.census.augmentation import enumerate_nonisomorphic
from app.certify.examples import example8_hypergraph, example9_hypergraph
from app.core.exceptions import InvalidOrderingError, SearchBoundExceededError
from app.hypergraphs.hypergraph import Hypergraph3, complete_hypergraph, delete_edge, tight_cycle
from app.models.schemas import DigraphArc, DigraphColoring, Role, VanishingCertificate
from app.orderings.digraph import (
    digraph_vanishing_oracle,
    forced_coloring,
    is_consistent_coloring,
    pair_sharing_connected,
    refutes_vanishing,
)
from app.orderings.roles import RoleConflict, ordering_positions, roles_under_ordering, verify_vanishing_certificate
from app.orderings.search import find_vanishing_ordering


def _first_vanishing_permutation(h: Hypergraph3) -> list[int] | None:
    for ordering in permutations(range(h.n)):
        if not isinstance(roles_under_ordering(h, ordering), RoleConflict):
            return list(ordering)
    return None


def _random_hypergraph(rng: random.Random, n: int) -> Hypergraph3:
    density = rng.uniform(0.1, 0.6)
    return Hypergraph3.from_edges(n, [t for t in combinations(range(n), 3) if rng.random() < density])


def test_single_edge_roles() -> None:
    h = Hypergraph3.from_edges(3, [(0, 1, 2)])

    roles = roles_under_ordering(h, [0, 1, 2])

    assert roles == {(0, 1): Role.left, (0, 2): Role.top, (1, 2): Role.right}
    assert roles_under_ordering(h, [2, 1, 0]) == {(1, 2): Role.left, (0, 2): Role.top, (0, 1): Role.right}


def test_k4_identity_ordering_conflicts() -> None:
    conflict = roles_under_ordering(complete_hypergraph(4), [0, 1, 2, 3])

    assert isinstance(conflict, RoleConflict)
    assert conflict.pair == (0, 2)
    assert conflict.roles == (Role.top, Role.left)
    assert (1, 2) in conflict.conflicts


def test_ordering_must_be_permutation() -> None:
    with pytest.raises(InvalidOrderingError):
        ordering_positions([0, 1, 1], 3)
    with pytest.raises(InvalidOrderingError):
        roles_under_ordering(Hypergraph3(n=3, edges=frozenset()), [0, 1])


def test_search_on_known_graphs() -> None:
    single = find_vanishing_ordering(Hypergraph3.from_edges(3, [(0, 1, 2)]))
    cycle = tight_cycle(6)

    assert single is not None and single.ordering == [0, 1, 2]
    certificate = find_vanishing_ordering(cycle)
    assert certificate is not None
    assert verify_vanishing_certificate(cycle, certificate)
    assert find_vanishing_ordering(complete_hypergraph(4)) is None
    assert find_vanishing_ordering(delete_edge(complete_hypergraph(4), (1, 2, 3))) is None
    assert find_vanishing_ordering(example9_hypergraph()) is None
    assert find_vanishing_ordering(example8_hypergraph(1)) is None


def test_edgeless_graph_vanishes_with_identity() -> None:
    certificate = find_vanishing_ordering(Hypergraph3(n=4, edges=frozenset()))

    assert certificate == VanishingCertificate(ordering=[0, 1, 2, 3], roles={})


def test_search_returns_lexicographically_least_ordering() -> None:
    rng = random.Random(5)
    for _ in range(25):
        h = _random_hypergraph(rng, 5)
        found = find_vanishing_ordering(h)
        expected = _first_vanishing_permutation(h)
        assert (found.ordering if found is not None else None) == expected


def test_search_bound() -> None:
    with pytest.raises(SearchBoundExceededError):
        find_vanishing_ordering(Hypergraph3(n=13, edges=frozenset()))


def test_verifier_rejects_tampering() -> None:
    cycle = tight_cycle(6)
    certificate = find_vanishing_ordering(cycle)
    assert certificate is not None
    pair, role = next(iter(certificate.roles.items()))
    flipped = Role.top if role is not Role.top else Role.left

    assert not verify_vanishing_certificate(cycle, certificate.model_copy(update={"roles": {**certificate.roles, pair: flipped}}))
    assert not verify_vanishing_certificate(cycle, certificate.model_copy(update={"ordering": [0, 0, 1, 2, 3, 4]}))
    assert not verify_vanishing_certificate(
        cycle, certificate.model_copy(update={"roles": {**certificate.roles, (4, 9): Role.left}})
    )
    missing = dict(certificate.roles)
    del missing[pair]
    assert not verify_vanishing_certificate(cycle, certificate.model_copy(update={"roles": missing}))
    assert not verify_vanishing_certificate(complete_hypergraph(4), VanishingCertificate(ordering=[0, 1, 2, 3], roles={}))


def test_oracle_single_edge_and_witness() -> None:
    h = Hypergraph3.from_edges(3, [(0, 1, 2)])

    result = digraph_vanishing_oracle(h)

    assert result.vanishing
    assert result.coloring is not None
    assert result.coloring.acyclic["1-2"]
    assert is_consistent_coloring(h, result.coloring)


def test_oracle_refutes_example_graphs_with_three_cycles() -> None:
    for h in (example9_hypergraph(), example8_hypergraph(1), example8_hypergraph(2)):
        result = digraph_vanishing_oracle(h)
        assert not result.vanishing
        assert result.coloring is not None
        assert not any(result.coloring.acyclic.values())
        assert set(result.coloring.cycles) == {"1-2", "1-3", "2-3"}


def test_oracle_reports_conflict_pair_for_k4() -> None:
    result = digraph_vanishing_oracle(complete_hypergraph(4))

    assert not result.vanishing
    assert result.coloring is None
    assert result.conflict_pair is not None
    assert forced_coloring(complete_hypergraph(4)) is None


@pytest.mark.parametrize("n", [3, 4, 5])
def test_oracle_agrees_with_search_on_every_class(n: int) -> None:
    for h in enumerate_nonisomorphic(n):
        assert digraph_vanishing_oracle(h).vanishing == (find_vanishing_ordering(h) is not None)


@pytest.mark.slow
def test_oracle_agrees_with_search_on_random_graphs() -> None:
    rng = random.Random(2024)
    for _ in range(1000):
        h = _random_hypergraph(rng, rng.choice([6, 7]))
        assert digraph_vanishing_oracle(h).vanishing == (find_vanishing_ordering(h) is not None)


def test_refutation_evidence_replay() -> None:
    h = example9_hypergraph()
    evidence = forced_coloring(h)
    assert evidence is not None

    assert pair_sharing_connected(h)
    assert refutes_vanishing(h, evidence)

    first = evidence.arcs[0]
    recolored = DigraphColoring(
        arcs=[DigraphArc(tail=first.tail, head=first.head, color=first.color % 3 + 1), *evidence.arcs[1:]],
        acyclic={},
    )
    assert not refutes_vanishing(h, recolored)
    assert not refutes_vanishing(h, DigraphColoring(arcs=evidence.arcs[1:], acyclic={}))


def test_refutation_needs_connected_pair_sharing() -> None:
    two_edges = Hypergraph3.from_edges(6, [(0, 1, 2), (3, 4, 5)])
    evidence = forced_coloring(two_edges)

    assert evidence is not None
    assert not pair_sharing_connected(two_edges)
    assert not refutes_vanishing(two_edges, evidence)


def test_oracle_evidence_covers_only_the_refuting_component() -> None:
    shifted = [tuple(v + 3 for v in edge) for edge in example9_hypergraph().sorted_edges()]
    h = Hypergraph3.from_edges(12, [(0, 1, 2), *shifted])
    component = Hypergraph3.from_edges(12, shifted)
    assert not pair_sharing_connected(h)

    result = digraph_vanishing_oracle(h)

    assert not result.vanishing
    assert result.coloring is not None
    assert not any(result.coloring.acyclic.values())
    assert set(result.coloring.cycles) == {"1-2", "1-3", "2-3"}
    assert all(arc.tail >= 3 and arc.head >= 3 for arc in result.coloring.arcs)
    assert refutes_vanishing(component, result.coloring)


def test_explicit_zero_bound_is_not_the_default() -> None:
    single = Hypergraph3.from_edges(3, [(0, 1, 2)])

    with pytest.raises(SearchBoundExceededError):
        find_vanishing_ordering(single, max_vertices=0)
    with pytest.raises(SearchBoundExceededError):
        digraph_vanishing_oracle(single, max_vertices=0)


@pytest.mark.parametrize("seed", range(5))
def test_vanishing_survives_edge_deletion(seed: int) -> None:
    rng = random.Random(seed)
    checked = 0
    while checked < 10:
        h = _random_hypergraph(rng, rng.choice([5, 6, 7]))
        if h.edge_count == 0 or find_vanishing_ordering(h) is None:
            continue
        for edge in h.sorted_edges():
            assert find_vanishing_ordering(delete_edge(h, edge)) is not None
        checked += 1


@pytest.mark.parametrize("seed", range(5))
def test_certificate_mutations_are_rejected_or_genuinely_valid(seed: int) -> None:
    rng = random.Random(seed)
    checked = 0
    while checked < 20:
        h = _random_hypergraph(rng, rng.choice([5, 6, 7]))
        certificate = find_vanishing_ordering(h)
        if certificate is None or not certificate.roles:
            continue
        pair = rng.choice(sorted(certificate.roles))
        flipped = rng.choice([role for role in Role if role is not certificate.roles[pair]])
        assert not verify_vanishing_certificate(
            h, certificate.model_copy(update={"roles": {**certificate.roles, pair: flipped}})
        )

        ordering = list(certificate.ordering)
        i, j = rng.sample(range(h.n), 2)
        ordering[i], ordering[j] = ordering[j], ordering[i]
        swapped = certificate.model_copy(update={"ordering": ordering})
        forced = roles_under_ordering(h, ordering)
        genuine = not isinstance(forced, RoleConflict) and forced == certificate.roles
        assert verify_vanishing_certificate(h, swapped) == genuine
        checked += 1
