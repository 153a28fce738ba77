"""Census catalog files and the published list of nine 7-vertex graphs."""

from __future__ import annotations

from pathlib import Path

from pydantic import ValidationError

from app.census.checkpoint import write_json_atomic
from app.core.exceptions import CertificateFormatError
from app.hypergraphs.hypergraph import Hypergraph3
from app.hypergraphs.text_format import serialize_hypergraph
from app.models.schemas import Catalog, CensusRecord

CERTIFIED_SEVEN = (
    "abc, abd, abe, acf, acg, bdf, bdg, cef, deg",
    "abc, abd, abe, acf, acg, bdf, cdg, cef, efg",
    "abc, abd, abe, acf, adg, bdf, cef, efg",
    "abc, abd, abe, acf, aeg, bdf, bfg, cde, cdg, cef",
    "abc, abd, abe, acf, bcg, bdf, cde, ceg, efg",
    "abc, abd, ace, adg, bcf, bde, bfg, cdf, ceg",
    "abc, abd, ace, aef, afg, bcf, bde, beg, cdf, cdg",
    "abc, abd, ace, afg, bcf, bde, bfg, def",
    "abc, abd, ace, bde, bfg, cdf, ceg, cfg",
)

CATALOG_TEXT = "catalog.txt"
CATALOG_JSON = "catalog.json"


def paper_catalog_seven() -> list[Hypergraph3]:
    """The nine minimal 7-vertex graphs certified at 1/27, a..g mapped to 0..6, in published order."""
    return [Hypergraph3.from_letters(7, line) for line in CERTIFIED_SEVEN]


def record_graph(record: CensusRecord) -> Hypergraph3:
    return Hypergraph3.from_edges(record.n, record.edges)


def _record_block(index: int, record: CensusRecord) -> str:
    header = [
        f"# record {index} key={record.canonical_key}",
        f"# minimal={record.minimal} vanishing={record.vanishing} isolated={record.isolated_vertex_count}",
    ]
    if record.bucket is not None:
        header.append(f"# bucket={record.bucket.value}")
    for name, embeddable in sorted(record.palette_embeddable.items()):
        header.append(f"# palette {name}: {'embeds' if embeddable else 'avoided'}")
    return "\n".join(header) + "\n" + serialize_hypergraph(record_graph(record)) + "\n"


def write_catalog(catalog: Catalog, directory: Path) -> list[Path]:
    """Write one hypergraph block per record plus the JSON sidecar; return both paths."""
    directory.mkdir(parents=True, exist_ok=True)
    text_path = directory / CATALOG_TEXT
    json_path = directory / CATALOG_JSON
    blocks = [_record_block(index, record) for index, record in enumerate(catalog.records, start=1)]
    text_path.write_text("\n".join(blocks), encoding="ascii", newline="\n")
    write_json_atomic(json_path, catalog)
    return [text_path, json_path]


def read_catalog(path: Path) -> Catalog:
    """Load a catalog from its JSON sidecar (or the directory containing it)."""
    if path.is_dir():
        path = path / CATALOG_JSON
    try:
        return Catalog.model_validate_json(path.read_text(encoding="utf-8"))
    except (OSError, ValidationError) as exc:
        raise CertificateFormatError(f"cannot read catalog {path}: {exc}") from exc
