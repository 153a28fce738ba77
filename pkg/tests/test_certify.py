"""Unit tests for bipartition certificates, 1/27 certification and the explicit examples."""

import random
import time

import pytest

from app.certify.bipartition import (
    SHARED_ROLES,
    enumerate_part1,
    find_bipartition_certificate,
    mirror_certificate,
    verify_bipartition_certificate,
)
from app.certify.examples import (
    build_example8,
    build_example9,
    example8_hypergraph,
    example8_orderings,
    example9_hypergraph,
)
from app.certify.turan import certify_uniform_turan_1_27, verify_turan_certificate
from app.core.exceptions import InvalidHypergraphError, SearchBoundExceededError
from app.hypergraphs.hypergraph import Hypergraph3, complete_hypergraph, delete_edge, tight_cycle
from app.models.schemas import BipartitionCertificate, IntersectionMode, NonVanishingVerdict, Role
from app.orderings.roles import RoleConflict, roles_under_ordering


def _genuinely_valid(h: Hypergraph3, cert: BipartitionCertificate) -> bool:
    """Re-derive a bipartition certificate from its ordering without the verifier."""
    part1 = {tuple(sorted(edge)) for edge in cert.part1}
    part2 = {tuple(sorted(edge)) for edge in cert.part2}
    if len(part1) != len(cert.part1) or len(part2) != len(cert.part2):
        return False
    if part1 & part2 or part1 | part2 != set(h.edges):
        return False
    if sorted(cert.ordering) != list(range(h.n)):
        return False
    forced1 = roles_under_ordering(Hypergraph3(n=h.n, edges=frozenset(part1)), cert.ordering)
    forced2 = roles_under_ordering(Hypergraph3(n=h.n, edges=frozenset(part2)), cert.ordering)
    if isinstance(forced1, RoleConflict) or isinstance(forced2, RoleConflict):
        return False
    if forced1 != cert.roles1 or forced2 != cert.roles2:
        return False
    want1, want2 = SHARED_ROLES[cert.mode]
    return all(forced1[pair] is want1 and forced2[pair] is want2 for pair in set(forced1) & set(forced2))


def _mutate(cert: BipartitionCertificate, rng: random.Random) -> BipartitionCertificate:
    kind = rng.randrange(3)
    if kind == 0:
        field = rng.choice(["roles1", "roles2"])
        roles = dict(getattr(cert, field))
        if not roles:
            return cert
        pair = rng.choice(sorted(roles))
        roles[pair] = rng.choice([role for role in Role if role is not roles[pair]])
        return cert.model_copy(update={field: roles})
    if kind == 1:
        ordering = list(cert.ordering)
        i, j = rng.sample(range(len(ordering)), 2)
        ordering[i], ordering[j] = ordering[j], ordering[i]
        return cert.model_copy(update={"ordering": ordering})
    part1, part2 = list(cert.part1), list(cert.part2)
    if part1 and (not part2 or rng.random() < 0.5):
        part2.append(part1.pop(rng.randrange(len(part1))))
    else:
        part1.append(part2.pop(rng.randrange(len(part2))))
    return cert.model_copy(update={"part1": part1, "part2": part2})


def test_enumerate_part1_order() -> None:
    edges = [(0, 1, 2), (0, 1, 3), (0, 2, 3)]

    splits = list(enumerate_part1(edges))

    assert splits[0] == ()
    assert splits[1:4] == [((0, 1, 2),), ((0, 1, 3),), ((0, 2, 3),)]
    assert len(splits) == 8


def test_example9_certificate_replays() -> None:
    h, cert = build_example9()

    assert cert.horizontal.part1 == [(0, 1, 6)]
    assert cert.horizontal.ordering == [4, 6, 1, 3, 5, 0, 2]
    assert cert.vertical.ordering == [4, 1, 6, 3, 5, 0, 2]
    assert cert.nonvanishing.evidence is not None
    assert verify_turan_certificate(h, cert)


def test_example8_orderings_for_k1() -> None:
    horizontal, vertical = example8_orderings(1)

    assert horizontal == [2, 4, 3, 6, 5, 7, 0, 1]
    assert vertical == [2, 4, 6, 3, 5, 7, 0, 1]


@pytest.mark.parametrize("k", [1, 2, 3, 4, 5])
def test_example8_certificates_replay(k: int) -> None:
    h, cert = build_example8(k)

    assert h.n == 5 + 3 * k
    assert h.edge_count == 3 * (k + 2)
    assert cert.nonvanishing.evidence is not None
    assert verify_turan_certificate(h, cert)


def test_example8_needs_positive_k() -> None:
    with pytest.raises(InvalidHypergraphError):
        example8_hypergraph(0)


def test_certify_finds_certificates_for_examples() -> None:
    for h in (example9_hypergraph(), example8_hypergraph(1)):
        report = certify_uniform_turan_1_27(h)
        assert report.certified
        assert report.failed_conditions == []
        assert report.certificate is not None
        assert verify_turan_certificate(h, report.certificate)


def test_certify_reports_failures() -> None:
    vanishing = certify_uniform_turan_1_27(tight_cycle(6))
    k4 = certify_uniform_turan_1_27(complete_hypergraph(4))

    assert vanishing.failed_conditions == ["has a vanishing ordering"]
    assert vanishing.vanishing is not None
    assert not k4.certified
    assert k4.vanishing is None
    assert k4.failed_conditions


def test_certify_bound() -> None:
    with pytest.raises(SearchBoundExceededError):
        certify_uniform_turan_1_27(Hypergraph3(n=11, edges=frozenset()))


def test_parallel_bipartition_search_matches_serial() -> None:
    h = example9_hypergraph()

    serial = find_bipartition_certificate(h, IntersectionMode.horizontal)
    parallel = find_bipartition_certificate(h, IntersectionMode.horizontal, jobs=2)

    assert serial is not None
    assert serial == parallel


def test_parallel_bipartition_search_stops_at_first_window() -> None:
    # blow-up of one edge with parts {0, 1}, {2, 3}, {4..8}: 20 edges, 2^20 splits
    h = Hypergraph3.from_edges(9, [(a, b, c) for a in (0, 1) for b in (2, 3) for c in range(4, 9)])
    assert h.edge_count == 20

    serial = find_bipartition_certificate(h, IntersectionMode.horizontal)
    started = time.perf_counter()
    parallel = find_bipartition_certificate(h, IntersectionMode.horizontal, jobs=2)
    elapsed = time.perf_counter() - started

    assert serial is not None
    assert serial.part1 == []
    assert parallel == serial
    assert elapsed < 10


def test_explicit_zero_bound_is_not_the_default() -> None:
    single = Hypergraph3.from_edges(3, [(0, 1, 2)])

    with pytest.raises(SearchBoundExceededError):
        find_bipartition_certificate(single, IntersectionMode.horizontal, max_vertices=0)
    with pytest.raises(SearchBoundExceededError):
        certify_uniform_turan_1_27(single, max_vertices=0)


def test_mirror_of_horizontal_certificate_is_valid() -> None:
    h, cert = build_example9()

    mirrored = mirror_certificate(cert.horizontal)

    assert mirrored.part1 == cert.horizontal.part2
    assert verify_bipartition_certificate(h, mirrored)


def test_turan_verifier_rejects_tampering() -> None:
    h, cert = build_example9()
    moved = cert.horizontal.model_copy(update={"part1": [], "part2": sorted(h.edges)})

    assert not verify_turan_certificate(h, cert.model_copy(update={"horizontal": cert.vertical}))
    assert not verify_turan_certificate(h, cert.model_copy(update={"horizontal": moved}))
    assert not verify_turan_certificate(
        h, cert.model_copy(update={"nonvanishing": NonVanishingVerdict(has_vanishing_ordering=True)})
    )
    assert not verify_turan_certificate(delete_edge(h, (3, 4, 5)), cert)


def test_turan_verifier_falls_back_to_search_without_evidence() -> None:
    h, cert = build_example9()

    assert verify_turan_certificate(h, cert.model_copy(update={"nonvanishing": NonVanishingVerdict()}))


def test_mutations_are_rejected_or_genuinely_valid() -> None:
    rng = random.Random(8)
    h, cert = build_example9()
    for _ in range(300):
        source = rng.choice([cert.horizontal, cert.vertical])
        mutated = _mutate(source, rng)
        assert verify_bipartition_certificate(h, mutated) == _genuinely_valid(h, mutated)


@pytest.mark.slow
def test_mutation_fuzz() -> None:
    rng = random.Random(1234)
    cases = [build_example9(), build_example8(1)]
    for _ in range(10_000):
        h, cert = rng.choice(cases)
        mutated = _mutate(rng.choice([cert.horizontal, cert.vertical]), rng)
        if verify_bipartition_certificate(h, mutated):
            assert _genuinely_valid(h, mutated)
