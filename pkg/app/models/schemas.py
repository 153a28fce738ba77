"""Pydantic models for certificates, catalogs and run metadata."""

from __future__ import annotations

from datetime import datetime
from enum import Enum
from typing import Any

from pydantic import BaseModel, ConfigDict, Field, field_serializer, field_validator

Pair = tuple[int, int]
Edge = tuple[int, int, int]


def pair_key(pair: Pair) -> str:
    return f"{pair[0]},{pair[1]}"


def parse_pair_key(value: Any) -> Pair:
    if isinstance(value, str):
        left, _, right = value.partition(",")
        u, v = int(left), int(right)
    else:
        u, v = (int(x) for x in value)
    return (u, v) if u < v else (v, u)


def _decode_pair_map(value: Any) -> Any:
    if isinstance(value, dict):
        return {parse_pair_key(key): item for key, item in value.items()}
    return value


class Role(str, Enum):
    """Position of a pair inside an edge under a fixed ordering."""

    left = "L"
    top = "T"
    right = "R"


class IntersectionMode(str, Enum):
    horizontal = "horizontal"
    vertical = "vertical"


class CensusBucket(str, Enum):
    certified = "CERTIFIED_1_27"
    palette_avoided = "PALETTE_AVOIDED"
    unresolved = "UNRESOLVED"


class DensityMode(str, Enum):
    exact = "exact"
    sampled = "sampled"


class VanishingCertificate(BaseModel):
    """Ordering plus left/top/right roles on covered pairs."""

    model_config = ConfigDict(frozen=True)

    ordering: list[int]
    roles: dict[Pair, Role]

    @field_validator("roles", mode="before")
    @classmethod
    def _decode_roles(cls, value: Any) -> Any:
        return _decode_pair_map(value)

    @field_serializer("roles")
    def _encode_roles(self, roles: dict[Pair, Role]) -> dict[str, str]:
        return {pair_key(pair): role.value for pair, role in sorted(roles.items())}


class DigraphArc(BaseModel):
    model_config = ConfigDict(frozen=True)

    tail: int
    head: int
    color: int = Field(ge=1, le=3)


class DigraphColoring(BaseModel):
    """Simple digraph whose arcs turn every edge into a 1,2,3-colored directed triangle."""

    model_config = ConfigDict(frozen=True)

    arcs: list[DigraphArc]
    acyclic: dict[str, bool]
    cycles: dict[str, list[int]] = Field(default_factory=dict)


class PaletteSpec(BaseModel):
    """JSON palette file: colors, allowed (left, top, right) triples, probabilities as "p/q"."""

    colors: list[str]
    allowed: list[tuple[str, str, str]]
    probs: dict[str, str] = Field(default_factory=dict)


class PaletteEmbedding(BaseModel):
    model_config = ConfigDict(frozen=True)

    ordering: list[int]
    coloring: dict[Pair, str]

    @field_validator("coloring", mode="before")
    @classmethod
    def _decode_coloring(cls, value: Any) -> Any:
        return _decode_pair_map(value)

    @field_serializer("coloring")
    def _encode_coloring(self, coloring: dict[Pair, str]) -> dict[str, str]:
        return {pair_key(pair): color for pair, color in sorted(coloring.items())}


class BipartitionCertificate(BaseModel):
    """Edge bipartition with one ordering vanishing for both parts."""

    model_config = ConfigDict(frozen=True)

    mode: IntersectionMode
    part1: list[Edge]
    part2: list[Edge]
    ordering: list[int]
    roles1: dict[Pair, Role]
    roles2: dict[Pair, Role]

    @field_validator("roles1", "roles2", mode="before")
    @classmethod
    def _decode_roles(cls, value: Any) -> Any:
        return _decode_pair_map(value)

    @field_serializer("roles1", "roles2")
    def _encode_roles(self, roles: dict[Pair, Role]) -> dict[str, str]:
        return {pair_key(pair): role.value for pair, role in sorted(roles.items())}


class NonVanishingVerdict(BaseModel):
    model_config = ConfigDict(frozen=True)

    has_vanishing_ordering: bool = False
    evidence: DigraphColoring | None = None


class TuranCertificate(BaseModel):
    """Witness that a 3-graph has uniform Turán density exactly 1/27."""

    model_config = ConfigDict(frozen=True)

    nonvanishing: NonVanishingVerdict
    horizontal: BipartitionCertificate
    vertical: BipartitionCertificate


class CensusRecord(BaseModel):
    canonical_key: str
    n: int
    edges: list[Edge]
    vanishing: bool
    minimal: bool
    isolated_vertex_count: int
    turan_certificate: TuranCertificate | None = None
    palette_embeddable: dict[str, bool] = Field(default_factory=dict)
    bucket: CensusBucket | None = None


class Catalog(BaseModel):
    n: int
    max_edges: int
    shard_depth: int
    records: list[CensusRecord]
    completed_tasks: int
    total_tasks: int
    nodes_visited: int = 0


class HostTranscript(BaseModel):
    seed: int
    palette: str
    generator: str
    n: int
    edge_count: int
    pair_colors: dict[Pair, str]

    @field_validator("pair_colors", mode="before")
    @classmethod
    def _decode_colors(cls, value: Any) -> Any:
        return _decode_pair_map(value)

    @field_serializer("pair_colors")
    def _encode_colors(self, colors: dict[Pair, str]) -> dict[str, str]:
        return {pair_key(pair): color for pair, color in sorted(colors.items())}


class RunManifest(BaseModel):
    subcommand: str
    argv: list[str]
    seeds: list[int] = Field(default_factory=list)
    versions: dict[str, str]
    started_at: datetime
    finished_at: datetime
    wall_clock_sec: float
    exit_code: int
    outputs: list[str] = Field(default_factory=list)
    result_digest: str


class CensusParams(BaseModel):
    model_config = ConfigDict(frozen=True)

    n: int
    max_edges: int
    shard_depth: int


class TaskOutcome(BaseModel):
    minimal: list[list[Edge]]
    nodes: int


class FrontierNode(BaseModel):
    edges: list[Edge]
    ordering: list[int]


class TaskSnapshot(BaseModel):
    """In-progress state of one census task: remaining stack plus what it has found."""

    task_key: str
    stack: list[FrontierNode]
    minimal: list[list[Edge]]
    nodes: int


class CensusCheckpoint(BaseModel):
    params: CensusParams
    completed: dict[str, TaskOutcome] = Field(default_factory=dict)
