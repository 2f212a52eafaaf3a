"""Exact rational and circle arithmetic.

Every coordinate in the package is a :class:`fractions.Fraction`.  Points of the
circle R/Z are fractions normalized into ``[0, 1)``; :func:`point` is the one
place that normalization happens.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from numbers import Rational
from typing import Hashable, Iterable, Sequence

CirclePoint = Fraction

HALF = Fraction(1, 2)


def as_fraction(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction.

    Floats are rejected: silently converting ``0.1`` would smuggle a binary
    rounding error into exact code.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"expected an exact rational, got {type(value).__name__}: {value!r}")


def point(value) -> CirclePoint:
    """Return ``value mod 1`` as a circle point."""
    return as_fraction(value) % 1


def expand(x, d: int) -> CirclePoint:
    """The expanding map ``x -> d*x mod 1``."""
    if d < 2:
        raise ValueError(f"expanding map needs d >= 2, got {d}")
    return (d * as_fraction(x)) % 1


def antipode(x) -> CirclePoint:
    return (as_fraction(x) + HALF) % 1


def circular_distance(x, y) -> Fraction:
    """Counterclockwise distance from ``x`` to ``y`` in ``[0, 1)``."""
    return (as_fraction(y) - as_fraction(x)) % 1


def fmt(value) -> str:
    """Serialize a rational as ``"p/q"`` (or ``"p"`` for integers)."""
    value = as_fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True)
class SortedPoints:
    """Result of :func:`circular_sort`.

    ``duplicates`` lists every value carried by more than one input entry,
    together with the labels that collided there.
    """

    entries: tuple[tuple[CirclePoint, Hashable], ...]
    duplicates: tuple[tuple[CirclePoint, tuple[Hashable, ...]], ...]

    @property
    def has_duplicates(self) -> bool:
        return bool(self.duplicates)

    @property
    def labels(self) -> tuple[Hashable, ...]:
        return tuple(label for _, label in self.entries)

    @property
    def values(self) -> tuple[CirclePoint, ...]:
        return tuple(value for value, _ in self.entries)


def circular_sort(points: Iterable[tuple[object, Hashable]]) -> SortedPoints:
    """Sort labelled points by their position on the circle.

    Entries at the same position are kept (in input order) and reported in
    ``duplicates`` instead of being merged.
    """
    normalized = [(point(value), label) for value, label in points]
    ordered = sorted(enumerate(normalized), key=lambda item: (item[1][0], item[0]))
    entries = tuple(entry for _, entry in ordered)

    groups: dict[Fraction, list[Hashable]] = {}
    for value, label in entries:
        groups.setdefault(value, []).append(label)
    duplicates = tuple(
        (value, tuple(labels)) for value, labels in groups.items() if len(labels) > 1
    )
    return SortedPoints(entries, duplicates)


def common_denominator(values: Sequence[Fraction]) -> int:
    return lcm(*(as_fraction(v).denominator for v in values)) if values else 1
