"""Unit tests for palettes, exact densities and palette embeddings."""

import random
from fractions import Fraction
from itertools import combinations
from pathlib import Path

import pytest

from app.census.augmentation import enumerate_nonisomorphic
from app.certify.examples import example9_hypergraph
from app.core.constants import FOUR_27_DENSITY, VANISHING_DENSITY
from app.core.exceptions import PaletteError, SearchBoundExceededError
from app.hypergraphs.hypergraph import Hypergraph3, complete_hypergraph, delete_edge, tight_cycle
from app.models.schemas import PaletteEmbedding
from app.orderings.roles import RoleConflict, roles_under_ordering
from app.orderings.search import find_vanishing_ordering
from app.palettes.embedding import (
    VANISHING_COLORS,
    embedding_from_certificate,
    find_palette_embedding,
    verify_palette_embedding,
)
from app.palettes.palette import (
    Palette,
    builtin_palettes,
    load_palette,
    make_distribution,
    palette_density,
    palette_to_spec,
)


def test_builtin_densities_are_exact() -> None:
    palettes = builtin_palettes()

    assert palette_density(palettes["vanishing"].palette, palettes["vanishing"].distribution) == VANISHING_DENSITY
    for name in ("four27_a", "four27_b"):
        entry = palettes[name]
        assert palette_density(entry.palette, entry.distribution) == FOUR_27_DENSITY
        assert entry.distribution == {"red": Fraction(2, 3), "blue": Fraction(1, 3)}


def test_distribution_validation() -> None:
    assert make_distribution({"x": "1/4", "y": Fraction(3, 4)}) == {"x": Fraction(1, 4), "y": Fraction(3, 4)}
    with pytest.raises(PaletteError):
        make_distribution({"x": "1/2", "y": "1/3"})
    with pytest.raises(PaletteError):
        make_distribution({"x": "3/2", "y": "-1/2"})
    with pytest.raises(PaletteError):
        make_distribution({"x": "half"})


def test_palette_validation() -> None:
    with pytest.raises(PaletteError):
        Palette.create(("red", "blue"), [("red", "green", "red")])
    with pytest.raises(PaletteError):
        Palette.create(("red", "red"), [])
    with pytest.raises(PaletteError):
        palette_density(Palette.create(("red", "blue"), []), {"red": Fraction(1)})


def test_palette_files(tmp_path: Path) -> None:
    path = tmp_path / "four27_a.json"
    path.write_text(palette_to_spec(builtin_palettes()["four27_a"]).model_dump_json(), encoding="utf-8")

    loaded = load_palette(str(path))

    assert loaded == builtin_palettes()["four27_a"]
    assert palette_density(loaded.palette, loaded.distribution) == FOUR_27_DENSITY


def test_palette_file_without_probabilities_is_uniform(tmp_path: Path) -> None:
    path = tmp_path / "abc.json"
    path.write_text('{"colors": ["A", "B", "C"], "allowed": [["A", "B", "C"]]}', encoding="utf-8")

    entry = load_palette(str(path))

    assert palette_density(entry.palette, entry.distribution) == VANISHING_DENSITY


def test_unknown_or_malformed_palette(tmp_path: Path) -> None:
    broken = tmp_path / "broken.json"
    broken.write_text('{"colors": "red"}', encoding="utf-8")

    with pytest.raises(PaletteError):
        load_palette("no-such-palette")
    with pytest.raises(PaletteError):
        load_palette(str(broken))


def test_vanishing_palette_matches_vanishing_orderings() -> None:
    vanishing = builtin_palettes()["vanishing"].palette
    cycle = tight_cycle(6)

    embedding = find_palette_embedding(cycle, vanishing)

    assert embedding is not None
    assert verify_palette_embedding(cycle, vanishing, embedding)
    assert find_palette_embedding(complete_hypergraph(4), vanishing) is None
    assert find_palette_embedding(example9_hypergraph(), vanishing) is None

    certificate = find_vanishing_ordering(cycle)
    assert certificate is not None
    assert verify_palette_embedding(cycle, vanishing, embedding_from_certificate(certificate))


def test_red_blue_palettes() -> None:
    palettes = builtin_palettes()
    k4 = complete_hypergraph(4)
    k4_minus = delete_edge(k4, (1, 2, 3))

    assert find_palette_embedding(k4, palettes["four27_a"].palette) is None
    assert find_palette_embedding(k4, palettes["four27_b"].palette) is None
    embedding = find_palette_embedding(k4_minus, palettes["four27_b"].palette)
    assert embedding is not None
    assert embedding.ordering == [0, 1, 2, 3]
    assert verify_palette_embedding(k4_minus, palettes["four27_b"].palette, embedding)


def test_edgeless_graph_embeds_anywhere() -> None:
    empty_palette = Palette.create(("red",), [])

    embedding = find_palette_embedding(Hypergraph3(n=3, edges=frozenset()), empty_palette)

    assert embedding == PaletteEmbedding(ordering=[0, 1, 2], coloring={})
    assert find_palette_embedding(Hypergraph3.from_edges(3, [(0, 1, 2)]), empty_palette) is None


def test_embedding_verifier_rejects_bad_colorings() -> None:
    palette = builtin_palettes()["four27_b"].palette
    h = Hypergraph3.from_edges(3, [(0, 1, 2)])
    good = PaletteEmbedding(ordering=[0, 1, 2], coloring={(0, 1): "red", (0, 2): "red", (1, 2): "blue"})

    assert verify_palette_embedding(h, palette, good)
    assert not verify_palette_embedding(h, palette, good.model_copy(update={"ordering": [1, 0, 2]}))
    assert not verify_palette_embedding(
        h, palette, good.model_copy(update={"coloring": {(0, 1): "red", (0, 2): "green", (1, 2): "blue"}})
    )
    assert not verify_palette_embedding(h, palette, good.model_copy(update={"ordering": [0, 1]}))


def test_embedding_bounds() -> None:
    vanishing = builtin_palettes()["vanishing"].palette
    wide = Palette.create(("a", "b", "c", "d", "e"), [("a", "b", "c")])

    with pytest.raises(SearchBoundExceededError):
        find_palette_embedding(Hypergraph3(n=13, edges=frozenset()), vanishing)
    with pytest.raises(SearchBoundExceededError):
        find_palette_embedding(Hypergraph3(n=3, edges=frozenset()), wide)


def _random_hypergraph(rng: random.Random, n: int) -> Hypergraph3:
    density = rng.uniform(0.1, 0.6)
    return Hypergraph3.from_edges(n, [t for t in combinations(range(n), 3) if rng.random() < density])


@pytest.mark.parametrize("n", [3, 4, 5])
def test_vanishing_palette_agrees_with_orderings_on_every_class(n: int) -> None:
    vanishing = builtin_palettes()["vanishing"].palette
    for h in enumerate_nonisomorphic(n):
        assert (find_palette_embedding(h, vanishing) is not None) == (find_vanishing_ordering(h) is not None)


def test_vanishing_palette_agrees_with_orderings_on_random_graphs() -> None:
    vanishing = builtin_palettes()["vanishing"].palette
    rng = random.Random(27)
    for _ in range(60):
        h = _random_hypergraph(rng, rng.choice([6, 7]))
        assert (find_palette_embedding(h, vanishing) is not None) == (find_vanishing_ordering(h) is not None)


@pytest.mark.slow
def test_vanishing_palette_agrees_with_orderings_on_many_random_graphs() -> None:
    vanishing = builtin_palettes()["vanishing"].palette
    rng = random.Random(2027)
    for _ in range(300):
        h = _random_hypergraph(rng, rng.choice([6, 7]))
        assert (find_palette_embedding(h, vanishing) is not None) == (find_vanishing_ordering(h) is not None)


@pytest.mark.parametrize("name", ["vanishing", "four27_a", "four27_b"])
def test_palette_embeddability_survives_edge_deletion(name: str) -> None:
    palette = builtin_palettes()[name].palette
    rng = random.Random(11)
    checked = 0
    while checked < 8:
        h = _random_hypergraph(rng, rng.choice([4, 5, 6]))
        if h.edge_count == 0 or find_palette_embedding(h, palette) is None:
            continue
        for edge in h.sorted_edges():
            assert find_palette_embedding(delete_edge(h, edge), palette) is not None
        checked += 1


@pytest.mark.parametrize("seed", range(3))
def test_embedding_mutations_are_rejected_or_genuinely_valid(seed: int) -> None:
    vanishing = builtin_palettes()["vanishing"].palette
    rng = random.Random(seed)
    checked = 0
    while checked < 15:
        h = _random_hypergraph(rng, rng.choice([5, 6, 7]))
        embedding = find_palette_embedding(h, vanishing)
        if embedding is None or not embedding.coloring:
            continue
        assert verify_palette_embedding(h, vanishing, embedding)

        # one allowed triple, so recoloring any covered pair breaks its edges
        pair = rng.choice(sorted(embedding.coloring))
        recolored = rng.choice([color for color in vanishing.colors if color != embedding.coloring[pair]])
        assert not verify_palette_embedding(
            h, vanishing, embedding.model_copy(update={"coloring": {**embedding.coloring, pair: recolored}})
        )
        dropped = {key: color for key, color in embedding.coloring.items() if key != pair}
        assert not verify_palette_embedding(h, vanishing, embedding.model_copy(update={"coloring": dropped}))

        ordering = list(embedding.ordering)
        i, j = rng.sample(range(h.n), 2)
        ordering[i], ordering[j] = ordering[j], ordering[i]
        forced = roles_under_ordering(h, ordering)
        genuine = not isinstance(forced, RoleConflict) and all(
            embedding.coloring[key] == VANISHING_COLORS[role] for key, role in forced.items()
        )
        assert verify_palette_embedding(h, vanishing, embedding.model_copy(update={"ordering": ordering})) == genuine
        checked += 1


def test_explicit_zero_bound_is_not_the_default() -> None:
    vanishing = builtin_palettes()["vanishing"].palette

    with pytest.raises(SearchBoundExceededError):
        find_palette_embedding(Hypergraph3(n=3, edges=frozenset()), vanishing, max_vertices=0)
    with pytest.raises(SearchBoundExceededError):
        find_palette_embedding(Hypergraph3(n=3, edges=frozenset()), vanishing, max_colors=0)
