"""Certificates that a 3-graph has uniform Turán density exactly 1/27.

Three conditions are certified together: the 3-graph has no vanishing
ordering, and it admits both a horizontal and a vertical bipartition
certificate.
"""

from __future__ import annotations

from dataclasses import dataclass

import structlog

from app.certify.bipartition import find_bipartition_certificate, verify_bipartition_certificate
from app.config.settings import get_settings
from app.core.exceptions import SearchBoundExceededError
from app.hypergraphs.hypergraph import Hypergraph3
from app.models.schemas import (
    BipartitionCertificate,
    IntersectionMode,
    NonVanishingVerdict,
    TuranCertificate,
    VanishingCertificate,
)
from app.orderings.digraph import forced_coloring, refutes_vanishing
from app.orderings.search import find_vanishing_ordering

logger = structlog.get_logger(__name__)


@dataclass(frozen=True, slots=True)
class CertificationReport:
    """Outcome of a certification attempt; ``certificate`` is set only when all three conditions hold."""

    certificate: TuranCertificate | None
    vanishing: VanishingCertificate | None
    horizontal: BipartitionCertificate | None
    vertical: BipartitionCertificate | None

    @property
    def certified(self) -> bool:
        return self.certificate is not None

    @property
    def failed_conditions(self) -> list[str]:
        if self.vanishing is not None:
            return ["has a vanishing ordering"]
        failed = []
        if self.horizontal is None:
            failed.append("no horizontal bipartition certificate")
        if self.vertical is None:
            failed.append("no vertical bipartition certificate")
        return failed


def nonvanishing_verdict(h: Hypergraph3) -> NonVanishingVerdict:
    """Attach the forced digraph coloring as evidence when it refutes vanishing on its own."""
    coloring = forced_coloring(h)
    if coloring is not None and refutes_vanishing(h, coloring):
        return NonVanishingVerdict(has_vanishing_ordering=False, evidence=coloring)
    return NonVanishingVerdict(has_vanishing_ordering=False)


def certify_uniform_turan_1_27(
    h: Hypergraph3,
    max_vertices: int | None = None,
    jobs: int = 1,
) -> CertificationReport:
    limit = get_settings().certify_max_vertices if max_vertices is None else max_vertices
    if h.n > limit:
        raise SearchBoundExceededError("certification vertex count", limit, h.n)

    vanishing = find_vanishing_ordering(h)
    if vanishing is not None:
        logger.info("certification_failed", n=h.n, edges=h.edge_count, reason="vanishing")
        return CertificationReport(certificate=None, vanishing=vanishing, horizontal=None, vertical=None)

    horizontal = find_bipartition_certificate(h, IntersectionMode.horizontal, max_vertices=limit, jobs=jobs)
    vertical = find_bipartition_certificate(h, IntersectionMode.vertical, max_vertices=limit, jobs=jobs)
    certificate = None
    if horizontal is not None and vertical is not None:
        certificate = TuranCertificate(
            nonvanishing=nonvanishing_verdict(h),
            horizontal=horizontal,
            vertical=vertical,
        )
    logger.info(
        "certification_completed",
        n=h.n,
        edges=h.edge_count,
        certified=certificate is not None,
        horizontal=horizontal is not None,
        vertical=vertical is not None,
    )
    return CertificationReport(certificate=certificate, vanishing=None, horizontal=horizontal, vertical=vertical)


def verify_turan_certificate(h: Hypergraph3, cert: TuranCertificate) -> bool:
    """Re-check all three conditions from scratch.

    Non-vanishing is accepted from the attached evidence when that evidence is
    conclusive; otherwise a fresh ordering search decides it.
    """
    if cert.nonvanishing.has_vanishing_ordering:
        return False
    if cert.horizontal.mode is not IntersectionMode.horizontal or cert.vertical.mode is not IntersectionMode.vertical:
        return False
    if not verify_bipartition_certificate(h, cert.horizontal):
        return False
    if not verify_bipartition_certificate(h, cert.vertical):
        return False

    evidence = cert.nonvanishing.evidence
    if evidence is not None and refutes_vanishing(h, evidence):
        return True
    try:
        return find_vanishing_ordering(h) is None
    except SearchBoundExceededError as exc:
        logger.warning("turan_verification_inconclusive", n=h.n, limit=exc.limit)
        return False
