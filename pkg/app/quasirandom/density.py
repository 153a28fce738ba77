"""Epsilon-linear density and (d, eps)-denseness, exactly for small n and by sampling otherwise.

Exact mode tabulates the edge count of every vertex subset by doubling over
vertices, so the cost is O(2^n) array work. Sampled mode draws subsets from
per-trial streams spawned off the master seed: its density is an upper bound
on the true minimum and its denseness check only ever reports violations.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil, comb

import numpy as np
import structlog

from app.config.settings import get_settings
from app.core.exceptions import MeasurementError, SearchBoundExceededError
from app.hypergraphs.hypergraph import Hypergraph3, edges_by_vertex
from app.models.schemas import DensityMode
from app.quasirandom.sampling import make_generator

logger = structlog.get_logger(__name__)


@dataclass(frozen=True, slots=True)
class DensityEstimate:
    value: Fraction | None
    mode: DensityMode
    subset: tuple[int, ...]
    subset_size: int
    subsets_checked: int

    @property
    def is_upper_bound(self) -> bool:
        return self.mode is DensityMode.sampled


@dataclass(frozen=True, slots=True)
class DenseCheck:
    holds: bool
    mode: DensityMode
    d: Fraction
    eps: Fraction
    subsets_checked: int
    violation: tuple[int, ...] | None = None
    violation_edges: int | None = None
    required: Fraction | None = None


def _as_fraction(value: Fraction | float | str | int, name: str) -> Fraction:
    try:
        return Fraction(value).limit_denominator(10**12) if isinstance(value, float) else Fraction(value)
    except (ValueError, ZeroDivisionError) as exc:
        raise MeasurementError(f"{name}={value!r} is not a number") from exc


def min_subset_size(n: int, eps: Fraction) -> int:
    if not 0 < eps <= 1:
        raise MeasurementError(f"eps must lie in (0, 1], got {eps}")
    return max(3, ceil(eps * n))


def subset_edge_counts(h: Hypergraph3) -> np.ndarray:
    """counts[mask] = number of edges inside the vertex set encoded by mask."""
    counts = np.zeros(1, dtype=np.int64)
    incident = edges_by_vertex(h)
    for u in range(h.n):
        # pairs x < y < u closing an edge with u
        link_masks = [0] * u
        for a, b, c in incident[u]:
            if c == u:
                link_masks[b] |= 1 << a
        link = np.zeros(1, dtype=np.int64)
        for x in range(u):
            masks = np.arange(1 << x, dtype=np.uint32)
            link = np.concatenate([link, link + np.bitwise_count(masks & np.uint32(link_masks[x])).astype(np.int64)])
        counts = np.concatenate([counts, counts + link])
    return counts


def _mask_vertices(mask: int, n: int) -> tuple[int, ...]:
    return tuple(v for v in range(n) if mask >> v & 1)


def _exact_minima(h: Hypergraph3, min_size: int) -> dict[int, tuple[int, int]]:
    """Per subset size s >= min_size: (fewest edges, a mask attaining it)."""
    limit = get_settings().exact_density_max_vertices
    if h.n > limit:
        raise SearchBoundExceededError("exact density vertex count", limit, h.n)
    counts = subset_edge_counts(h)
    sizes = np.bitwise_count(np.arange(1 << h.n, dtype=np.uint32))
    minima: dict[int, tuple[int, int]] = {}
    for size in range(min_size, h.n + 1):
        masks = np.flatnonzero(sizes == size)
        position = int(np.argmin(counts[masks]))
        minima[size] = (int(counts[masks[position]]), int(masks[position]))
    return minima


def _trial_generators(seed: int, trials: int) -> list[np.random.Generator]:
    return [make_generator(child) for child in np.random.SeedSequence(seed).spawn(trials)]


def _count_inside(edge_array: np.ndarray, members: np.ndarray) -> np.ndarray:
    """Edges inside each row of a boolean membership matrix."""
    if edge_array.size == 0:
        return np.zeros(members.shape[0], dtype=np.int64)
    return members[:, edge_array].all(axis=2).sum(axis=1)


def _batched_counts(h: Hypergraph3, subsets: list[np.ndarray]) -> np.ndarray:
    edge_array = np.array(h.sorted_edges(), dtype=np.int64).reshape(-1, 3)
    batch = max(1, min(get_settings().density_batch_size, 2**24 // max(1, 3 * len(edge_array))))
    totals = []
    for start in range(0, len(subsets), batch):
        chunk = subsets[start : start + batch]
        members = np.zeros((len(chunk), h.n), dtype=bool)
        for row, subset in enumerate(chunk):
            members[row, subset] = True
        totals.append(_count_inside(edge_array, members))
    return np.concatenate(totals) if totals else np.zeros(0, dtype=np.int64)


def epsilon_linear_density(
    h: Hypergraph3,
    eps: Fraction | float | str,
    mode: DensityMode = DensityMode.exact,
    trials: int = 1000,
    seed: int = 0,
) -> DensityEstimate:
    """Minimum induced density over subsets of at least max(3, ceil(eps n)) vertices."""
    eps_value = _as_fraction(eps, "eps")
    size = min_subset_size(h.n, eps_value)
    if size > h.n:
        return DensityEstimate(value=None, mode=mode, subset=(), subset_size=size, subsets_checked=0)

    if mode is DensityMode.exact:
        minima = _exact_minima(h, size)
        best: tuple[Fraction, int] | None = None
        for s, (edges, mask) in minima.items():
            density = Fraction(edges, comb(s, 3))
            if best is None or density < best[0]:
                best = (density, mask)
        assert best is not None
        checked = sum(comb(h.n, s) for s in minima)
        return DensityEstimate(
            value=best[0],
            mode=mode,
            subset=_mask_vertices(best[1], h.n),
            subset_size=size,
            subsets_checked=checked,
        )

    if trials < 1:
        raise MeasurementError("sampled mode needs at least one trial")
    subsets = [np.sort(rng.choice(h.n, size=size, replace=False)) for rng in _trial_generators(seed, trials)]
    counts = _batched_counts(h, subsets)
    position = int(np.argmin(counts))
    logger.debug("epsilon_density_sampled", n=h.n, trials=trials, size=size)
    return DensityEstimate(
        value=Fraction(int(counts[position]), comb(size, 3)),
        mode=mode,
        subset=tuple(int(v) for v in subsets[position]),
        subset_size=size,
        subsets_checked=trials,
    )


def check_d_eps_dense(
    h: Hypergraph3,
    d: Fraction | float | str,
    eps: Fraction | float | str,
    mode: DensityMode = DensityMode.exact,
    trials: int = 1000,
    seed: int = 0,
) -> DenseCheck:
    """Every W must induce at least d*C(|W|, 3) - eps*n^3 edges; report a violating W if one is seen."""
    d_value = _as_fraction(d, "d")
    eps_value = _as_fraction(eps, "eps")
    if eps_value < 0:
        raise MeasurementError(f"eps must be non-negative, got {eps_value}")
    slack = eps_value * h.n**3

    def required(size: int) -> Fraction:
        return d_value * comb(size, 3) - slack

    if h.n < 3:
        return DenseCheck(holds=True, mode=mode, d=d_value, eps=eps_value, subsets_checked=0)

    if mode is DensityMode.exact:
        minima = _exact_minima(h, 3)
        checked = sum(comb(h.n, s) for s in minima)
        for size, (edges, mask) in minima.items():
            if edges < required(size):
                return DenseCheck(
                    holds=False,
                    mode=mode,
                    d=d_value,
                    eps=eps_value,
                    subsets_checked=checked,
                    violation=_mask_vertices(mask, h.n),
                    violation_edges=edges,
                    required=required(size),
                )
        return DenseCheck(holds=True, mode=mode, d=d_value, eps=eps_value, subsets_checked=checked)

    if trials < 1:
        raise MeasurementError("sampled mode needs at least one trial")
    subsets = []
    for rng in _trial_generators(seed, trials):
        size = int(rng.integers(3, h.n + 1))
        subsets.append(np.sort(rng.choice(h.n, size=size, replace=False)))
    counts = _batched_counts(h, subsets)
    for subset, edges in zip(subsets, (int(c) for c in counts)):
        if edges < required(len(subset)):
            return DenseCheck(
                holds=False,
                mode=mode,
                d=d_value,
                eps=eps_value,
                subsets_checked=trials,
                violation=tuple(int(v) for v in subset),
                violation_edges=int(edges),
                required=required(len(subset)),
            )
    return DenseCheck(holds=True, mode=mode, d=d_value, eps=eps_value, subsets_checked=trials)
