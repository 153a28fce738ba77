"""Digraph-coloring oracle for vanishing orderings.

A 3-graph has a vanishing ordering iff its covered pairs can be oriented and
colored 1, 2, 3 so that every edge becomes a directed triangle colored 1, 2, 3
in cyclic order, and some two colors span an acyclic subgraph. Fixing one
edge's orientation and color forces every edge reachable through shared
pairs, so a component has at most six colorings: three cyclic color shifts,
each optionally combined with reversing all arcs and swapping colors 1 and 2.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import networkx as nx
import structlog

from app.config.settings import get_settings
from app.core.exceptions import SearchBoundExceededError
from app.hypergraphs.hypergraph import Edge, Hypergraph3, Pair, make_pair, pair_thirds
from app.models.schemas import DigraphArc, DigraphColoring

logger = structlog.get_logger(__name__)

Arc = tuple[int, int, int]  # tail, head, color
COLOR_PAIRS = ((1, 2), (1, 3), (2, 3))


def _shift(color: int, k: int) -> int:
    return (color - 1 + k) % 3 + 1


def _swap12(color: int) -> int:
    return {1: 2, 2: 1, 3: 3}[color]


def _transform(arc: Arc, reverse: bool, shift: int) -> Arc:
    tail, head, color = arc
    if reverse:
        tail, head, color = head, tail, _swap12(color)
    return tail, head, _shift(color, shift)


@dataclass(frozen=True, slots=True)
class OracleResult:
    """Verdict plus a coloring: acyclic witness when vanishing, cycle evidence otherwise.

    ``conflict_pair`` is set when propagation contradicts itself, in which case
    no consistent coloring exists and ``coloring`` is None.
    """

    vanishing: bool
    coloring: DigraphColoring | None
    conflict_pair: Pair | None = None


def _propagate(seed: Edge, thirds: dict[Pair, list[int]]) -> tuple[dict[Pair, Arc], list[Edge]] | Pair:
    """Force arcs through shared pairs from the seed edge; return arcs and edges, or the conflicting pair."""
    a, b, c = seed
    arcs: dict[Pair, Arc] = {(a, b): (a, b, 1)}
    edges: list[Edge] = []
    seen: set[Edge] = set()
    queue: deque[tuple[Edge, Pair]] = deque([(seed, (a, b))])
    while queue:
        edge, known = queue.popleft()
        if edge in seen:
            continue
        seen.add(edge)
        edges.append(edge)
        tail, head, color = arcs[known]
        (w,) = (u for u in edge if u != tail and u != head)
        for forced in ((head, w, _shift(color, 1)), (w, tail, _shift(color, 2))):
            pair = make_pair(forced[0], forced[1])
            existing = arcs.get(pair)
            if existing is None:
                arcs[pair] = forced
                for z in thirds[pair]:
                    neighbour: Edge = tuple(sorted((pair[0], pair[1], z)))  # type: ignore[assignment]
                    if neighbour not in seen:
                        queue.append((neighbour, pair))
            elif existing != forced:
                return pair
        for z in thirds[known]:
            neighbour = tuple(sorted((known[0], known[1], z)))  # type: ignore[assignment]
            if neighbour not in seen:
                queue.append((neighbour, known))
    return arcs, sorted(edges)


def _subgraph(arcs: list[Arc], colors: tuple[int, int]) -> nx.DiGraph:
    graph = nx.DiGraph()
    graph.add_edges_from((tail, head) for tail, head, color in arcs if color in colors)
    return graph


def _cycle_vertices(graph: nx.DiGraph) -> list[int]:
    try:
        cycle = nx.find_cycle(graph)
    except nx.NetworkXNoCycle:
        return []
    return [int(tail) for tail, _ in cycle]


def describe_coloring(arcs: list[Arc]) -> DigraphColoring:
    """Wrap arcs with acyclicity flags and one cycle per cyclic 2-color subgraph."""
    acyclic: dict[str, bool] = {}
    cycles: dict[str, list[int]] = {}
    for colors in COLOR_PAIRS:
        key = f"{colors[0]}-{colors[1]}"
        cycle = _cycle_vertices(_subgraph(arcs, colors))
        acyclic[key] = not cycle
        if cycle:
            cycles[key] = cycle
    return DigraphColoring(
        arcs=[DigraphArc(tail=t, head=h, color=c) for t, h, c in sorted(arcs)],
        acyclic=acyclic,
        cycles=cycles,
    )


def _component_arcs(h: Hypergraph3) -> list[list[Arc]] | Pair:
    """Arcs forced from the first edge of each pair-sharing component, or the pair where forcing fails."""
    thirds = pair_thirds(h)
    components: list[list[Arc]] = []
    covered: set[Edge] = set()
    for edge in h.sorted_edges():
        if edge in covered:
            continue
        propagated = _propagate(edge, thirds)
        if not isinstance(propagated[0], dict):
            return propagated  # type: ignore[return-value]
        arcs, edges = propagated  # type: ignore[misc]
        covered.update(edges)
        components.append(sorted(arcs.values()))
    return components


def forced_coloring(h: Hypergraph3) -> DigraphColoring | None:
    """The propagated coloring with every component in its seed state; None when no coloring exists.

    Polynomial in the size of ``h``, so it carries no vertex bound.
    """
    components = _component_arcs(h)
    if not isinstance(components, list):
        return None
    return describe_coloring([arc for component in components for arc in component])


def digraph_vanishing_oracle(h: Hypergraph3, max_vertices: int | None = None) -> OracleResult:
    """Decide vanishing through digraph colorings, independently of the ordering search."""
    limit = get_settings().oracle_max_vertices if max_vertices is None else max_vertices
    if h.n > limit:
        raise SearchBoundExceededError("digraph oracle vertex count", limit, h.n)

    components = _component_arcs(h)
    if not isinstance(components, list):
        logger.debug("digraph_oracle_conflict", pair=components)
        return OracleResult(vanishing=False, coloring=None, conflict_pair=components)

    # Any acyclic color pair can be moved onto {1, 2} by a global symmetry; the
    # remaining stabilizer (reverse all arcs, swap 1 and 2) fixes the first
    # component's orientation.
    chosen: list[list[Arc]] = []
    union = nx.DiGraph()

    def extend(index: int) -> bool:
        if index == len(components):
            return True
        reversals = (False,) if index == 0 else (False, True)
        for reverse in reversals:
            for shift in range(3):
                arcs = [_transform(arc, reverse, shift) for arc in components[index]]
                added = [(t, hd) for t, hd, color in arcs if color != 3]
                union.add_edges_from(added)
                if nx.is_directed_acyclic_graph(union):
                    chosen.append(arcs)
                    if extend(index + 1):
                        return True
                    chosen.pop()
                union.remove_edges_from(added)
        return False

    if extend(0):
        arcs = [arc for component in chosen for arc in component]
        logger.debug("digraph_oracle_completed", n=h.n, components=len(components), vanishing=True)
        return OracleResult(vanishing=True, coloring=describe_coloring(arcs))

    logger.debug("digraph_oracle_completed", n=h.n, components=len(components), vanishing=False)
    return OracleResult(vanishing=False, coloring=_refuting_evidence(components))


def _refuting_evidence(components: list[list[Arc]]) -> DigraphColoring:
    """The first component cyclic in all three color pairs on its own, else all components in seed state."""
    for index, component in enumerate(components):
        coloring = describe_coloring(component)
        if not any(coloring.acyclic.values()):
            logger.debug("digraph_oracle_refuting_component", component=index)
            return coloring
    return describe_coloring([arc for component in components for arc in component])


def is_consistent_coloring(h: Hypergraph3, coloring: DigraphColoring) -> bool:
    """One arc per covered pair, none elsewhere, and every edge a cyclic 1, 2, 3 triangle."""
    arcs: dict[Pair, Arc] = {}
    for arc in coloring.arcs:
        if arc.tail == arc.head or not (0 <= arc.tail < h.n and 0 <= arc.head < h.n):
            return False
        pair = make_pair(arc.tail, arc.head)
        if pair in arcs:
            return False
        arcs[pair] = (arc.tail, arc.head, arc.color)
    if set(arcs) != set(pair_thirds(h)):
        return False
    for a, b, c in h.edges:
        tail, head, color = arcs[(a, b)]
        w = c
        if arcs[make_pair(head, w)] != (head, w, _shift(color, 1)):
            return False
        if arcs[make_pair(w, tail)] != (w, tail, _shift(color, 2)):
            return False
    return True


def pair_sharing_connected(h: Hypergraph3) -> bool:
    """True iff the edges form one class under 'shares a pair' (vacuously for fewer than two edges)."""
    graph = nx.Graph()
    graph.add_nodes_from(h.edges)
    for pair, thirds in pair_thirds(h).items():
        members = [tuple(sorted((pair[0], pair[1], z))) for z in thirds]
        graph.add_edges_from(zip(members, members[1:]))
    return graph.number_of_nodes() < 2 or nx.is_connected(graph)


def refutes_vanishing(h: Hypergraph3, coloring: DigraphColoring) -> bool:
    """Check refutation evidence without trusting its flags.

    Conclusive only when the coloring is consistent, all three 2-color
    subgraphs contain a directed cycle, and the pair-sharing graph is connected
    so the coloring is unique up to global symmetry.
    """
    if h.edge_count == 0 or not is_consistent_coloring(h, coloring):
        return False
    if not pair_sharing_connected(h):
        return False
    arcs = [(arc.tail, arc.head, arc.color) for arc in coloring.arcs]
    return all(not nx.is_directed_acyclic_graph(_subgraph(arcs, colors)) for colors in COLOR_PAIRS)
