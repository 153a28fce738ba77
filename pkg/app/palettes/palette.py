"""Palettes: allowed (left, top, right) color triples and their random-construction densities."""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from pydantic import ValidationError

from app.core.exceptions import PaletteError
from app.models.schemas import PaletteSpec

ColorTriple = tuple[str, str, str]
ColorDistribution = dict[str, Fraction]


@dataclass(frozen=True, slots=True)
class Palette:
    """Color labels plus the ordered triples an edge's (left, top, right) pairs may carry."""

    colors: tuple[str, ...]
    allowed: frozenset[ColorTriple]

    def __post_init__(self) -> None:
        if not self.colors:
            raise PaletteError("palette must have at least one color")
        if len(set(self.colors)) != len(self.colors):
            raise PaletteError(f"palette colors {list(self.colors)} contain duplicates")
        known = set(self.colors)
        for triple in self.allowed:
            if len(triple) != 3 or any(color not in known for color in triple):
                raise PaletteError(f"allowed triple {triple} uses a color outside {sorted(known)}")

    @classmethod
    def create(cls, colors: Iterable[str], allowed: Iterable[Iterable[str]]) -> "Palette":
        return cls(colors=tuple(colors), allowed=frozenset(tuple(t) for t in allowed))  # type: ignore[misc]

    def sorted_allowed(self) -> list[ColorTriple]:
        return sorted(self.allowed)


@dataclass(frozen=True, slots=True)
class PaletteEntry:
    palette: Palette
    distribution: ColorDistribution


def make_distribution(probs: Mapping[str, Fraction | str | int]) -> ColorDistribution:
    """Parse exact probabilities ("2/3", Fraction, int); they must be non-negative and sum to 1."""
    distribution: ColorDistribution = {}
    for color, value in probs.items():
        try:
            probability = Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise PaletteError(f"probability {value!r} for color {color!r} is not an exact rational") from exc
        if probability < 0:
            raise PaletteError(f"probability for color {color!r} is negative")
        distribution[color] = probability
    if sum(distribution.values(), Fraction(0)) != 1:
        raise PaletteError(f"probabilities sum to {sum(distribution.values(), Fraction(0))}, expected 1")
    return distribution


def palette_density(palette: Palette, distribution: Mapping[str, Fraction]) -> Fraction:
    """Limiting edge density of the random construction driven by the palette."""
    if set(distribution) != set(palette.colors):
        raise PaletteError(
            f"distribution colors {sorted(distribution)} do not match palette colors {sorted(palette.colors)}"
        )
    return sum(
        (distribution[left] * distribution[top] * distribution[right] for left, top, right in palette.allowed),
        Fraction(0),
    )


def builtin_palettes() -> dict[str, PaletteEntry]:
    third = Fraction(1, 3)
    red_blue = {"red": Fraction(2, 3), "blue": Fraction(1, 3)}
    return {
        "vanishing": PaletteEntry(
            palette=Palette.create(("A", "B", "C"), [("A", "B", "C")]),
            distribution={"A": third, "B": third, "C": third},
        ),
        "four27_a": PaletteEntry(
            palette=Palette.create(("red", "blue"), [("red", "blue", "red")]),
            distribution=dict(red_blue),
        ),
        "four27_b": PaletteEntry(
            palette=Palette.create(("red", "blue"), [("red", "red", "blue")]),
            distribution=dict(red_blue),
        ),
    }


def palette_to_spec(entry: PaletteEntry) -> PaletteSpec:
    return PaletteSpec(
        colors=list(entry.palette.colors),
        allowed=entry.palette.sorted_allowed(),
        probs={color: str(entry.distribution[color]) for color in entry.palette.colors},
    )


def palette_from_spec(spec: PaletteSpec) -> PaletteEntry:
    palette = Palette.create(spec.colors, spec.allowed)
    if spec.probs:
        distribution = make_distribution(spec.probs)
    else:
        share = Fraction(1, len(palette.colors))
        distribution = {color: share for color in palette.colors}
    palette_density(palette, distribution)
    return PaletteEntry(palette=palette, distribution=distribution)


def load_palette(name_or_path: str) -> PaletteEntry:
    """Resolve a builtin palette name, else read a JSON palette file."""
    builtins = builtin_palettes()
    if name_or_path in builtins:
        return builtins[name_or_path]
    path = Path(name_or_path)
    try:
        spec = PaletteSpec.model_validate_json(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise PaletteError(f"unknown palette {name_or_path!r}: not a builtin and not readable ({exc})") from exc
    except ValidationError as exc:
        raise PaletteError(f"palette file {path} is malformed: {exc.error_count()} validation errors") from exc
    return palette_from_spec(spec)
