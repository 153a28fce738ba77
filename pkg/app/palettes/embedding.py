"""Exhaustive search for a 3-graph inside a palette construction."""

from __future__ import annotations

from collections.abc import Sequence

import structlog

from app.config.settings import get_settings
from app.core.exceptions import InvalidOrderingError, SearchBoundExceededError
from app.hypergraphs.hypergraph import Edge, Hypergraph3, Pair, edges_by_vertex, pair_thirds
from app.models.schemas import PaletteEmbedding, Role, VanishingCertificate
from app.orderings.roles import ordering_positions
from app.palettes.palette import ColorTriple, Palette

logger = structlog.get_logger(__name__)

VANISHING_COLORS = {Role.left: "A", Role.top: "B", Role.right: "C"}


def find_palette_embedding(
    h: Hypergraph3,
    palette: Palette,
    max_vertices: int | None = None,
    max_colors: int | None = None,
) -> PaletteEmbedding | None:
    """Search orderings and lazy pair colorings; the first hit in label order is returned."""
    settings = get_settings()
    vertex_limit = settings.palette_max_vertices if max_vertices is None else max_vertices
    color_limit = settings.palette_max_colors if max_colors is None else max_colors
    if h.n > vertex_limit:
        raise SearchBoundExceededError("palette embedding vertex count", vertex_limit, h.n)
    if len(palette.colors) > color_limit:
        raise SearchBoundExceededError("palette color count", color_limit, len(palette.colors))

    allowed = palette.sorted_allowed()
    if h.edge_count and not allowed:
        return None

    n = h.n
    incident = edges_by_vertex(h)
    position = [-1] * n
    ordering: list[int] = []
    coloring: dict[Pair, str] = {}

    def color_edges(pending: list[tuple[Pair, Pair, Pair]], index: int, depth: int) -> bool:
        if index == len(pending):
            return place(depth + 1)
        slots = pending[index]
        for triple in allowed:
            fresh: list[Pair] = []
            fits = True
            for pair, color in zip(slots, triple):
                current = coloring.get(pair)
                if current is None:
                    coloring[pair] = color
                    fresh.append(pair)
                elif current != color:
                    fits = False
                    break
            if fits and color_edges(pending, index + 1, depth):
                return True
            for pair in fresh:
                del coloring[pair]
        return False

    def place(depth: int) -> bool:
        if depth == n:
            return True
        for v in range(n):
            if position[v] != -1:
                continue
            position[v] = depth
            ordering.append(v)
            pending = []
            for edge in incident[v]:
                others = [u for u in edge if u != v]
                if all(position[u] != -1 for u in others):
                    x, y = sorted(others, key=position.__getitem__)
                    pending.append(((min(x, y), max(x, y)), (min(x, v), max(x, v)), (min(y, v), max(y, v))))
            if color_edges(pending, 0, depth):
                return True
            ordering.pop()
            position[v] = -1
        return False

    found = place(0)
    logger.debug("palette_search_completed", n=n, colors=len(palette.colors), found=found)
    if not found:
        return None
    return PaletteEmbedding(ordering=list(ordering), coloring=dict(sorted(coloring.items())))


def edge_colors(edge: Edge, position: Sequence[int], coloring: dict[Pair, str]) -> ColorTriple | None:
    i, j, k = sorted(edge, key=position.__getitem__)
    colors = (
        coloring.get((min(i, j), max(i, j))),
        coloring.get((min(i, k), max(i, k))),
        coloring.get((min(j, k), max(j, k))),
    )
    if any(color is None for color in colors):
        return None
    return colors  # type: ignore[return-value]


def verify_palette_embedding(h: Hypergraph3, palette: Palette, embedding: PaletteEmbedding) -> bool:
    """Every edge's (left, top, right) colors must be an allowed triple; uncovered pairs are ignored."""
    try:
        position = ordering_positions(embedding.ordering, h.n)
    except InvalidOrderingError:
        return False
    known = set(palette.colors)
    for pair in pair_thirds(h):
        if embedding.coloring.get(pair) not in known:
            return False
    return all(edge_colors(edge, position, embedding.coloring) in palette.allowed for edge in h.edges)


def embedding_from_certificate(cert: VanishingCertificate) -> PaletteEmbedding:
    """Carry a vanishing certificate into the vanishing palette (left A, top B, right C)."""
    return PaletteEmbedding(
        ordering=list(cert.ordering),
        coloring={pair: VANISHING_COLORS[role] for pair, role in cert.roles.items()},
    )
