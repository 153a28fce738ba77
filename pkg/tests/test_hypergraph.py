"""Unit tests for hypergraph values and the text interchange format."""

from pathlib import Path

import pytest

from app.core.exceptions import HypergraphFormatError, InvalidHypergraphError
from app.hypergraphs.hypergraph import (
    Hypergraph3,
    complete_hypergraph,
    delete_edge,
    pair_thirds,
    relabel,
    tight_cycle,
)
from app.hypergraphs.text_format import parse_hypergraph, read_hypergraph, serialize_hypergraph, write_hypergraph


def test_from_edges_sorts_and_rejects_duplicates() -> None:
    h = Hypergraph3.from_edges(4, [(2, 0, 1), (3, 1, 0)])

    assert h.sorted_edges() == [(0, 1, 2), (0, 1, 3)]
    assert h.degrees() == [2, 2, 1, 1]
    with pytest.raises(InvalidHypergraphError):
        Hypergraph3.from_edges(4, [(0, 1, 2), (2, 1, 0)])
    with pytest.raises(InvalidHypergraphError):
        Hypergraph3.from_edges(4, [(0, 0, 1)])
    with pytest.raises(InvalidHypergraphError):
        Hypergraph3.from_edges(3, [(0, 1, 3)])


def test_letters_and_isolated_vertices() -> None:
    h = Hypergraph3.from_letters(5, "abc, abd")

    assert h.letters() == "abc, abd"
    assert h.isolated_vertices() == [4]
    assert h.has_edge((2, 1, 0))


def test_edge_helpers() -> None:
    k4 = complete_hypergraph(4)
    minus = delete_edge(k4, (1, 2, 3))

    assert minus.edge_count == 3
    assert minus.with_edge((3, 2, 1)) == k4
    assert sorted(pair_thirds(minus)[(0, 1)]) == [2, 3]
    with pytest.raises(InvalidHypergraphError):
        delete_edge(minus, (1, 2, 3))
    with pytest.raises(InvalidHypergraphError):
        minus.subhypergraph([(1, 2, 3)])


def test_relabel_and_tight_cycle() -> None:
    cycle = tight_cycle(6)

    assert cycle.edge_count == 6
    assert relabel(cycle, [1, 2, 3, 4, 5, 0]) == cycle
    with pytest.raises(InvalidHypergraphError):
        relabel(cycle, [0, 0, 1, 2, 3, 4])


def test_parse_ignores_comments_and_vertex_order() -> None:
    text = "# K4 minus an edge\n4 3\n\n2 1 0\n0 1 3\n# trailing\n3 2 0\n"

    h = parse_hypergraph(text)

    assert serialize_hypergraph(h) == "4 3\n0 1 2\n0 1 3\n0 2 3"
    assert parse_hypergraph(serialize_hypergraph(h)) == h


@pytest.mark.parametrize(
    ("text", "line"),
    [
        ("", 1),
        ("4 2\n0 1 2\n", 2),
        ("4 1\n0 1 x\n", 2),
        ("4 1\n0 1 1\n", 2),
        ("4 1\n0 1 4\n", 2),
        ("4 2\n0 1 2\n2 1 0\n", 3),
        ("4 -1\n", 1),
    ],
)
def test_parse_errors_name_the_line(text: str, line: int) -> None:
    with pytest.raises(HypergraphFormatError) as info:
        parse_hypergraph(text)

    assert info.value.line == line


def test_file_roundtrip_and_missing_file(tmp_path: Path) -> None:
    h = Hypergraph3.from_letters(7, "abc, cde, efg")
    path = tmp_path / "h.txt"

    write_hypergraph(path, h, comment="three edges")

    assert path.read_text(encoding="ascii").startswith("# three edges\n7 3\n")
    assert read_hypergraph(path) == h
    with pytest.raises(HypergraphFormatError):
        read_hypergraph(tmp_path / "missing.txt")
