"""Plain-text interchange format for 3-graphs.

Line 1 is ``n m``; then ``m`` lines ``a b c``. Vertices inside a line may come
in any order. Lines starting with ``#`` and blank lines are ignored.
"""

from __future__ import annotations

from pathlib import Path

from app.core.exceptions import HypergraphFormatError
from app.hypergraphs.hypergraph import Edge, Hypergraph3


def _content_lines(text: str) -> list[tuple[int, str]]:
    lines: list[tuple[int, str]] = []
    for number, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        lines.append((number, stripped))
    return lines


def _parse_ints(line: str, line_number: int, expected: int, what: str) -> list[int]:
    tokens = line.split()
    if len(tokens) != expected:
        raise HypergraphFormatError(f"{what} must have {expected} integers, got {len(tokens)}", line_number)
    try:
        values = [int(token) for token in tokens]
    except ValueError as exc:
        raise HypergraphFormatError(f"{what} contains a non-integer token", line_number) from exc
    if any(value < 0 for value in values):
        raise HypergraphFormatError(f"{what} contains a negative integer", line_number)
    return values


def parse_hypergraph(text: str) -> Hypergraph3:
    """Decode the hypergraph format; every error names the offending line."""
    lines = _content_lines(text)
    if not lines:
        raise HypergraphFormatError("missing header line 'n m'", 1)

    header_line, header = lines[0]
    n, m = _parse_ints(header, header_line, 2, "header")

    body = lines[1:]
    if len(body) != m:
        last_line = body[-1][0] if body else header_line
        raise HypergraphFormatError(f"header announces {m} edges but {len(body)} edge lines follow", last_line)

    seen: dict[Edge, int] = {}
    for line_number, line in body:
        a, b, c = _parse_ints(line, line_number, 3, "edge line")
        if len({a, b, c}) != 3:
            raise HypergraphFormatError("repeated vertex inside an edge", line_number)
        if max(a, b, c) >= n:
            raise HypergraphFormatError(f"vertex index {max(a, b, c)} is not below n={n}", line_number)
        edge: Edge = tuple(sorted((a, b, c)))  # type: ignore[assignment]
        if edge in seen:
            raise HypergraphFormatError(f"duplicate edge {edge} (first seen on line {seen[edge]})", line_number)
        seen[edge] = line_number

    return Hypergraph3(n=n, edges=frozenset(seen))


def serialize_hypergraph(h: Hypergraph3) -> str:
    """Encode with edges sorted lexicographically and no trailing newline."""
    lines = [f"{h.n} {h.edge_count}"]
    lines.extend(f"{a} {b} {c}" for a, b, c in h.sorted_edges())
    return "\n".join(lines)


def read_hypergraph(path: Path) -> Hypergraph3:
    try:
        text = path.read_text(encoding="ascii")
    except UnicodeDecodeError as exc:
        raise HypergraphFormatError(f"{path} is not ASCII") from exc
    except OSError as exc:
        raise HypergraphFormatError(f"cannot read {path}: {exc}") from exc
    return parse_hypergraph(text)


def write_hypergraph(path: Path, h: Hypergraph3, comment: str | None = None) -> None:
    prefix = "".join(f"# {line}\n" for line in comment.splitlines()) if comment else ""
    path.write_text(prefix + serialize_hypergraph(h) + "\n", encoding="ascii", newline="\n")
