"""Random palette hosts: i.i.d. pair colors, edges where (left, top, right) colors are allowed."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
import structlog

from app.config.settings import get_settings
from app.core.exceptions import PaletteError
from app.hypergraphs.hypergraph import Hypergraph3, Pair
from app.hypergraphs.text_format import write_hypergraph
from app.models.schemas import HostTranscript
from app.palettes.palette import ColorDistribution, Palette, palette_density

logger = structlog.get_logger(__name__)

BIT_GENERATORS = ("PCG64", "PCG64DXSM", "Philox", "SFC64", "MT19937")


def make_generator(seed: int | np.random.SeedSequence, name: str | None = None) -> np.random.Generator:
    """Generator over a named numpy bit generator; the name is recorded in transcripts."""
    name = name or get_settings().sample_generator
    if name not in BIT_GENERATORS:
        raise PaletteError(f"unknown bit generator {name!r}; expected one of {', '.join(BIT_GENERATORS)}")
    return np.random.Generator(getattr(np.random, name)(seed))


@dataclass(frozen=True, slots=True)
class HostSample:
    hypergraph: Hypergraph3
    palette_name: str
    seed: int
    generator: str
    pair_colors: dict[Pair, str]

    def transcript(self) -> HostTranscript:
        return HostTranscript(
            seed=self.seed,
            palette=self.palette_name,
            generator=self.generator,
            n=self.hypergraph.n,
            edge_count=self.hypergraph.edge_count,
            pair_colors=self.pair_colors,
        )

    def write(self, directory: Path, stem: str = "host") -> list[Path]:
        directory.mkdir(parents=True, exist_ok=True)
        graph_path = directory / f"{stem}.txt"
        transcript_path = directory / f"{stem}.json"
        write_hypergraph(graph_path, self.hypergraph, comment=f"palette={self.palette_name} seed={self.seed}")
        transcript_path.write_text(self.transcript().model_dump_json(indent=2) + "\n", encoding="utf-8")
        return [graph_path, transcript_path]


def sample_palette_host(
    n: int,
    palette: Palette,
    distribution: ColorDistribution,
    seed: int,
    palette_name: str = "custom",
    generator: str | None = None,
) -> HostSample:
    """Color the C(n, 2) pairs in lexicographic order, then keep triples i<j<k whose colors are allowed."""
    palette_density(palette, distribution)
    generator_name = generator or get_settings().sample_generator
    rng = make_generator(seed, generator_name)

    colors = list(palette.colors)
    q = len(colors)
    probabilities = np.array([float(distribution[color]) for color in colors])
    upper_i, upper_j = np.triu_indices(n, k=1)
    drawn = rng.choice(q, size=upper_i.size, p=probabilities / probabilities.sum())
    matrix = np.zeros((n, n), dtype=np.int64)
    matrix[upper_i, upper_j] = drawn
    matrix[upper_j, upper_i] = drawn

    allowed = np.zeros(q**3, dtype=bool)
    index = {color: position for position, color in enumerate(colors)}
    for left, top, right in palette.allowed:
        allowed[(index[left] * q + index[top]) * q + index[right]] = True

    edges: list[tuple[int, int, int]] = []
    for i in range(n - 2):
        rest_j, rest_k = np.triu_indices(n - i - 1, k=1)
        j = rest_j + i + 1
        k = rest_k + i + 1
        codes = (matrix[i, j] * q + matrix[i, k]) * q + matrix[j, k]
        hits = np.flatnonzero(allowed[codes])
        edges.extend((i, int(j[h]), int(k[h])) for h in hits)

    pair_colors = {(int(a), int(b)): colors[int(c)] for a, b, c in zip(upper_i, upper_j, drawn)}
    host = Hypergraph3(n=n, edges=frozenset(edges))
    logger.info("palette_host_sampled", n=n, palette=palette_name, seed=seed, edges=host.edge_count)
    return HostSample(
        hypergraph=host,
        palette_name=palette_name,
        seed=seed,
        generator=generator_name,
        pair_colors=pair_colors,
    )


def host_respects_palette(sample: HostSample, palette: Palette) -> bool:
    """Edges are exactly the triples whose transcript colors form an allowed triple."""
    n = sample.hypergraph.n
    colors = sample.pair_colors
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                triple = (colors[(i, j)], colors[(i, k)], colors[(j, k)])
                if ((i, j, k) in sample.hypergraph.edges) != (triple in palette.allowed):
                    return False
    return True
