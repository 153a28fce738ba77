"""Sort minimal census records into certified, palette-avoided and unresolved buckets."""

from __future__ import annotations

from collections import Counter
from concurrent.futures import ProcessPoolExecutor

import structlog

from app.census.catalog import record_graph
from app.certify.turan import certify_uniform_turan_1_27
from app.hypergraphs.hypergraph import Hypergraph3, delete_edge
from app.models.schemas import Catalog, CensusBucket, CensusRecord
from app.orderings.search import find_vanishing_ordering
from app.palettes.embedding import find_palette_embedding
from app.palettes.palette import builtin_palettes

logger = structlog.get_logger(__name__)

AVOIDANCE_PALETTES = ("four27_a", "four27_b")


def is_minimal_nonvanishing(h: Hypergraph3) -> bool:
    """Recheck from scratch: no vanishing ordering, but every single-edge deletion has one."""
    if find_vanishing_ordering(h) is not None:
        return False
    return all(find_vanishing_ordering(delete_edge(h, edge)) is not None for edge in h.sorted_edges())


def classify_record(record: CensusRecord) -> CensusRecord:
    h = record_graph(record)
    report = certify_uniform_turan_1_27(h)
    palettes = builtin_palettes()
    embeddable = {
        name: find_palette_embedding(h, palettes[name].palette) is not None for name in AVOIDANCE_PALETTES
    }
    if report.certificate is not None:
        bucket = CensusBucket.certified
    elif not all(embeddable.values()):
        bucket = CensusBucket.palette_avoided
    else:
        bucket = CensusBucket.unresolved
    return record.model_copy(
        update={"turan_certificate": report.certificate, "palette_embeddable": embeddable, "bucket": bucket}
    )


def classify_catalog(catalog: Catalog, jobs: int = 1) -> Catalog:
    """Fill certificates and palette verdicts; every record lands in exactly one bucket."""
    if jobs <= 1:
        records = [classify_record(record) for record in catalog.records]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(classify_record, catalog.records))

    for record in records:
        if record.bucket is CensusBucket.unresolved:
            logger.warning("census_record_unresolved", key=record.canonical_key, edges=record.edges)
    counts = Counter(record.bucket.value for record in records if record.bucket is not None)
    logger.info("census_classified", n=catalog.n, **counts)
    return catalog.model_copy(update={"records": records})
