"""From a flower-supported periodic orbit to a deck shuffler, and back.

The orbit's uniform measure is pushed to ``[0, 1)`` through its cumulative
distribution.  Each atom ``x`` becomes the interval ``J_x = [mu([0, x)),
mu([0, x]))`` and the doubling map on atoms becomes a deck shuffler on
these intervals.
"""
from __future__ import annotations

import json
from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import InternalConsistencyError
from .exact import HALF, CirclePoint, as_fraction, expand, fmt
from .flower import Flower, flower_from_orbit
from .iet import DeckShuffler, ab_coding, flower_from_iet, iet_apply
from .orbits import PeriodicOrbit, interlacing_number, orbit_from_word


@dataclass(frozen=True)
class OrbitMeasure:
    """Uniform probability measure on one periodic orbit."""

    orbit: PeriodicOrbit

    @property
    def support(self) -> tuple[CirclePoint, ...]:
        return tuple(sorted(self.orbit.points))

    @property
    def weight(self) -> Fraction:
        return Fraction(1, len(self.orbit.points))

    def mass(self, lo, hi, *, closed_right: bool = True) -> Fraction:
        """Mass of ``[lo, hi]`` (or ``[lo, hi)``) for ``0 <= lo <= hi <= 1``."""
        pts = self.support
        upper = bisect_right(pts, hi) if closed_right else bisect_left(pts, hi)
        return max(upper - bisect_left(pts, lo), 0) * self.weight


def uniform(orbit: PeriodicOrbit) -> OrbitMeasure:
    return OrbitMeasure(orbit)


@dataclass(frozen=True)
class CdfMap:
    """Distribution function of an orbit measure on a flower avoiding 0.

    ``value(x) = mu([0, x])`` is the right-continuous function.  ``left(x) =
    mu([0, x))`` is its left limit; at an atom the pair spans the interval
    the atom occupies on the IET side.
    """

    measure: OrbitMeasure
    flower: Flower

    def value(self, x) -> Fraction:
        pts = self.measure.support
        return bisect_right(pts, as_fraction(x) % 1) * self.measure.weight

    def left(self, x) -> Fraction:
        pts = self.measure.support
        return bisect_left(pts, as_fraction(x) % 1) * self.measure.weight

    def atom(self, x) -> tuple[Fraction, Fraction]:
        return self.left(x), self.value(x)

    def table(self) -> list[tuple[CirclePoint, Fraction]]:
        """``(x, mu([0, x]))`` at every support point and petal endpoint."""
        xs = set(self.measure.support)
        for p in self.flower.petals:
            xs.update((p.left, p.right))
        return [(x, self.value(x)) for x in sorted(xs)]


def cdf(mu: OrbitMeasure, F: Flower) -> CdfMap:
    if F.d != 2:
        raise ValueError("only flowers of the doubling map are supported")
    if F.contains(0):
        raise ValueError("flower contains 0; a flower-supported measure of positive mass would need an atom at 0")
    for x in mu.support:
        if not F.contains_interior(x):
            raise ValueError(f"orbit point {fmt(x)} is not in the interior of a petal")
    for i, p in enumerate(F.petals):
        if not any(p.contains(x) for x in mu.support):
            raise ValueError(f"petal {i + 1} {p!r} carries no mass; remove it and use the smaller flower")
    return CdfMap(mu, F)


def _middle_petal(F: Flower) -> int:
    hits = [i for i, p in enumerate(F.petals) if p.contains_interior(HALF)]
    if len(hits) != 1:
        raise ValueError("no petal contains 1/2 in its interior")
    return hits[0]


def iet_from_flower(mu: OrbitMeasure, F: Flower) -> DeckShuffler:
    """Deck shuffler with lengths ``mu(P_1), ..., mu(P_m ∩ [0,1/2)), mu(P_m ∩ [1/2,1)), ..., mu(P_{2m-1})``."""
    cdf(mu, F)
    n = len(F.petals)
    if n % 2 == 0:
        raise ValueError(f"flower has {n} petals; the doubling map needs an odd count")
    m = (n + 1) // 2
    mid = _middle_petal(F)
    if mid != m - 1:
        raise ValueError(f"petal containing 1/2 is number {mid + 1}, expected {m}")
    lengths = []
    for i, p in enumerate(F.petals):
        if i == mid:
            lengths.append(mu.mass(p.left, HALF, closed_right=False))
            lengths.append(mu.mass(HALF, p.right))
        else:
            lengths.append(mu.mass(p.left, p.right))
    if any(v == 0 for v in lengths):
        raise ValueError(
            f"zero-length interval in {[fmt(v) for v in lengths]}: the middle petal's mass lies on one side of 1/2"
        )
    if sum(lengths) != 1:
        raise InternalConsistencyError("petal masses do not sum to 1", {"lengths": lengths})
    return DeckShuffler(lengths)


@dataclass
class RoundTripReport:
    word: str
    interlacing: int
    flower: Flower
    iet: DeckShuffler | None
    checks: dict[str, bool] = field(default_factory=dict)
    witnesses: dict[str, list] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return bool(self.checks) and all(self.checks.values())

    def to_json(self) -> dict:
        return {
            "word": self.word,
            "interlacing": self.interlacing,
            "flower": [p.to_json() for p in self.flower.petals],
            "lengths": [fmt(v) for v in self.iet.lengths] if self.iet else None,
            "checks": dict(self.checks),
            "witnesses": {k: [[fmt(v) for v in w] for w in ws] for k, ws in self.witnesses.items() if ws},
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json())


def round_trip(o: PeriodicOrbit | str) -> RoundTripReport:
    """Orbit -> flower -> deck shuffler -> flower, with exact checks.

    * conjugacy: ``T(J_x) = J_{2x}`` for every atom, checked on left ends;
    * inverse_coding: the A/B itinerary of ``J_x`` spells ``x`` in binary;
    * flower_containment: the flower extracted from ``T`` holds the orbit.
    """
    if isinstance(o, str):
        o = orbit_from_word(o)
    if o.is_fixed_point:
        raise ValueError("the fixed point 0 lies in no flower")
    F = flower_from_orbit(o)
    mu = uniform(o)
    h = cdf(mu, F)
    T = iet_from_flower(mu, F)
    report = RoundTripReport(o.word, interlacing_number(o), F, T)

    bad_conj, bad_code = [], []
    for x in mu.support:
        lo = h.left(x)
        target = h.left(expand(x, 2))
        image = iet_apply(T, lo)
        if image != target:
            bad_conj.append((x, image, target))
        value = ab_coding(T, lo).value
        if value != x:
            bad_code.append((x, value))
    G = flower_from_iet(T)
    missing = [(x,) for x in mu.support if not G.contains(x)]

    report.checks = {
        "conjugacy": not bad_conj,
        "inverse_coding": not bad_code,
        "flower_containment": not missing,
    }
    report.witnesses = {"conjugacy": bad_conj, "inverse_coding": bad_code, "flower_containment": missing}
    return report
