"""Flowers for the expanding map E_d.

A flower is a finite union of closed arcs (petals) of total length 1/d whose
translates by i/d tile the circle.  Everything here is exact.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import InternalConsistencyError
from .exact import HALF, CirclePoint, as_fraction, circular_distance, circular_sort, fmt, point
from .orbits import PeriodicOrbit, check_forward_invariant


@dataclass(frozen=True)
class Arc:
    """Closed arc running counterclockwise from ``left`` to ``right``.

    ``left == right`` denotes a single point; the full circle is never
    represented.
    """

    left: CirclePoint
    right: CirclePoint

    def __post_init__(self):
        object.__setattr__(self, "left", point(self.left))
        object.__setattr__(self, "right", point(self.right))

    @property
    def length(self) -> Fraction:
        return circular_distance(self.left, self.right)

    @property
    def is_point(self) -> bool:
        return self.left == self.right

    def contains(self, x) -> bool:
        return circular_distance(self.left, x) <= self.length

    def contains_interior(self, x) -> bool:
        return 0 < circular_distance(self.left, x) < self.length

    def contains_half_open(self, x) -> bool:
        """Membership in ``[left, right)``."""
        return circular_distance(self.left, x) < self.length

    def translate(self, t) -> "Arc":
        t = as_fraction(t)
        return Arc(self.left + t, self.right + t)

    def pieces(self) -> list[tuple[Fraction, Fraction]]:
        """Closed linear intervals inside [0, 1] covering the arc."""
        if self.left + self.length <= 1:
            return [(self.left, self.left + self.length)]
        return [(self.left, Fraction(1)), (Fraction(0), self.right)]

    def to_json(self) -> list[str]:
        return [fmt(self.left), fmt(self.right)]

    def __repr__(self) -> str:
        return f"Arc[{fmt(self.left)}, {fmt(self.right)}]"


def arcs_from_pieces(pieces: Iterable[tuple[Fraction, Fraction]]) -> list[Arc]:
    """Merge closed linear intervals of [0, 1] into arcs, gluing across 0 ~ 1."""
    merged: list[list[Fraction]] = []
    for lo, hi in sorted((Fraction(0), Fraction(0)) if lo == 1 else (lo, hi) for lo, hi in pieces):
        if merged and lo <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], hi)
        else:
            merged.append([lo, hi])
    if not merged:
        return []
    if len(merged) == 1 and merged[0] == [0, 1]:
        raise ValueError("arc union covers the whole circle")
    if len(merged) > 1 and merged[-1][1] == 1 and merged[0][0] == 0:
        first = merged.pop(0)
        merged[-1][1] = first[1]
    return [Arc(lo, hi) for lo, hi in merged]


def intersect_arcs(first: Sequence[Arc], second: Sequence[Arc]) -> list[Arc]:
    pieces = []
    for a in first:
        for lo1, hi1 in a.pieces():
            for b in second:
                for lo2, hi2 in b.pieces():
                    lo, hi = max(lo1, lo2), min(hi1, hi2)
                    if lo <= hi:
                        pieces.append((lo, hi))
    return arcs_from_pieces(pieces)


def preimage_arcs(arcs: Sequence[Arc], d: int) -> list[Arc]:
    """``E_d^{-1}`` of a union of arcs."""
    pieces = []
    for arc in arcs:
        for j in range(d):
            left = (arc.left + j) / d
            pre = Arc(left, left + arc.length / d)
            pieces.extend(pre.pieces())
    return arcs_from_pieces(pieces)


@dataclass(frozen=True)
class Flower:
    petals: tuple[Arc, ...]
    d: int = 2

    def __post_init__(self):
        petals = tuple(sorted(self.petals, key=lambda arc: arc.left))
        object.__setattr__(self, "petals", petals)

    @property
    def total_length(self) -> Fraction:
        return sum((p.length for p in self.petals), Fraction(0))

    def contains(self, x) -> bool:
        return any(p.contains(x) for p in self.petals)

    def contains_interior(self, x) -> bool:
        return any(p.contains_interior(x) for p in self.petals)

    def petal_index(self, x) -> int | None:
        for i, p in enumerate(self.petals):
            if p.contains(x):
                return i
        return None

    def to_json(self) -> dict:
        return {"d": self.d, "petals": [p.to_json() for p in self.petals]}

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    @classmethod
    def from_json(cls, data: dict | str) -> "Flower":
        if isinstance(data, str):
            data = json.loads(data)
        petals = tuple(Arc(as_fraction(l), as_fraction(r)) for l, r in data["petals"])
        return cls(petals, int(data.get("d", 2)))


@dataclass(frozen=True)
class Violation:
    kind: str
    detail: str


def _open_overlap(a: Arc, b: Arc) -> bool:
    for lo1, hi1 in a.pieces():
        for lo2, hi2 in b.pieces():
            if max(lo1, lo2) < min(hi1, hi2):
                return True
    return False


def _closed_overlap(a: Arc, b: Arc) -> bool:
    return a.contains(b.left) or b.contains(a.left)


def validate_flower(F: Flower) -> list[Violation]:
    """Check the flower axioms exactly; an empty list means valid."""
    out: list[Violation] = []
    d = F.d
    petals = F.petals
    if d < 2:
        return [Violation("degree", f"d must be >= 2, got {d}")]
    if not petals:
        return [Violation("empty", "a flower needs at least one petal")]

    for p in petals:
        if p.is_point:
            out.append(Violation("degenerate petal", f"{p!r} is a single point"))
    for i in range(len(petals)):
        for j in range(i + 1, len(petals)):
            if _closed_overlap(petals[i], petals[j]):
                out.append(Violation("overlap", f"{petals[i]!r} meets {petals[j]!r}"))

    total = F.total_length
    if total != Fraction(1, d):
        out.append(Violation("wrong total measure", f"petal lengths sum to {fmt(total)}, expected 1/{d}"))

    kind = "antipodal-interior intersection" if d == 2 else "translate-interior intersection"
    for k in range(1, d):
        for p in petals:
            moved = p.translate(Fraction(k, d))
            for q in petals:
                if _open_overlap(moved, q):
                    out.append(Violation(kind, f"{p!r} + {k}/{d} meets interior of {q!r}"))

    pieces = sorted(piece for k in range(d) for p in petals for piece in p.translate(Fraction(k, d)).pieces())
    reach = Fraction(0)
    for lo, hi in pieces:
        if lo > reach:
            out.append(Violation("not covering", f"translates miss ({fmt(reach)}, {fmt(lo)})"))
        reach = max(reach, hi)
    if reach < 1:
        out.append(Violation("not covering", f"translates miss ({fmt(reach)}, 1)"))

    if d == 2:
        if len(petals) % 2 == 0:
            out.append(Violation("even petal count", f"{len(petals)} petals; flowers for E_2 have an odd count"))
        lefts = sorted(point(p.left + HALF) for p in petals)
        rights = sorted(p.right for p in petals)
        if lefts != rights:
            out.append(Violation("endpoint pairing", "antipodes of left endpoints are not the right endpoints"))
    return out


def is_valid(F: Flower) -> bool:
    return not validate_flower(F)


def preimage_select(F: Flower, x) -> CirclePoint:
    """The preimage of ``x`` inside ``F``, right-continuous at petal ends.

    Half-open petals ``[left, right)`` and their i/d translates tile the
    circle, so exactly one preimage qualifies.
    """
    x = point(x)
    d = F.d
    hits = [y for y in ((x + j) / d for j in range(d)) if any(p.contains_half_open(y) for p in F.petals)]
    if len(hits) != 1:
        raise ValueError(f"not a flower: {len(hits)} preimages of {fmt(x)} selected")
    return hits[0]


def maximal_invariant_approx(F: Flower, k: int) -> list[Arc]:
    """``F ∩ E_d^{-1}F ∩ ... ∩ E_d^{-k}F`` as closed arcs (points kept)."""
    if k < 0:
        raise ValueError(f"k must be >= 0, got {k}")
    base = list(F.petals)
    current = list(base)
    for _ in range(k):
        current = intersect_arcs(base, preimage_arcs(current, F.d))
    return current


def flower_from_cores(cores: Sequence[Arc], *, tolerance: Fraction = Fraction(0)) -> Flower:
    """Smallest-commitment flower for E_2 around mutually non-antipodal cores.

    ``cores`` must alternate with their antipodal copies around the circle.
    Each gap between a core and a neighbouring antipodal copy is cut at its
    midpoint, which keeps the cut set symmetric under ``x -> x + 1/2``.
    Negative gaps (overlaps) up to ``tolerance`` are tolerated for inexact
    inputs; anything else raises :class:`InternalConsistencyError`.
    """
    items = [(arc, "core", i) for i, arc in enumerate(cores)]
    items += [(arc.translate(HALF), "anti", i) for i, arc in enumerate(cores)]
    items.sort(key=lambda item: (item[0].left, item[1]))
    n = len(items)
    for i in range(n):
        if items[i][1] == items[(i + 1) % n][1]:
            raise InternalConsistencyError(
                "cores do not alternate with their antipodes",
                {"first": items[i][0], "second": items[(i + 1) % n][0]},
            )

    gaps = []
    for i in range(n):
        a, b = items[i][0], items[(i + 1) % n][0]
        gap = circular_distance(a.right, b.left)
        if gap > HALF:
            gap -= 1
        if gap < -tolerance:
            raise InternalConsistencyError(
                "core and antipodal core overlap", {"first": a, "second": b, "gap": gap}
            )
        gaps.append(gap)
    covered = sum((item[0].length for item in items), Fraction(0)) + sum(gaps, Fraction(0))
    if covered != 1:
        raise InternalConsistencyError("cores wind around the circle more than once", {"total": covered})

    petals = []
    for i, (arc, kind, _) in enumerate(items):
        if kind != "core":
            continue
        left = arc.left - gaps[i - 1] / 2
        right = arc.right + gaps[i] / 2
        petal = Arc(left, right)
        if petal.is_point:
            raise InternalConsistencyError("petal collapses to a point", {"core": arc})
        petals.append(petal)
    return Flower(tuple(petals), 2)


def orbit_blocks(orbit: PeriodicOrbit) -> list[list[CirclePoint]]:
    """Maximal circular runs of orbit points in the sort of orbit ∪ antiorbit."""
    labelled = [(x, "O") for x in orbit.points] + [(x, "A") for x in orbit.antiorbit()]
    ordered = circular_sort(labelled)
    if ordered.has_duplicates:
        raise ValueError(f"orbit {orbit.word!r} meets its antiorbit")
    entries = list(ordered.entries)
    n = len(entries)
    start = next(i for i in range(n) if entries[i][1] == "O" and entries[i - 1][1] == "A")
    entries = entries[start:] + entries[:start]
    blocks: list[list[CirclePoint]] = []
    for i, (x, label) in enumerate(entries):
        if label != "O":
            continue
        if i > 0 and entries[i - 1][1] == "O":
            blocks[-1].append(x)
        else:
            blocks.append([x])
    return blocks


def flower_from_orbit(orbit: PeriodicOrbit) -> Flower:
    """Canonical flower around a periodic orbit of the doubling map.

    Petals cover the orbit blocks and are cut at the midpoints of the gaps
    to the neighbouring antiorbit points, so the petal count equals the
    interlacing number.
    """
    if orbit.d != 2:
        raise ValueError("canonical flowers are built for the doubling map only")
    if orbit.is_fixed_point:
        raise ValueError("the fixed point 0 lies in no flower that avoids 0")
    cores = [Arc(block[0], block[-1]) for block in orbit_blocks(orbit)]
    F = flower_from_cores(cores)
    violations = validate_flower(F)
    if violations:
        raise InternalConsistencyError("canonical flower is invalid", {"violations": violations})
    if F.contains(0) or not all(F.contains_interior(x) for x in orbit.points):
        raise InternalConsistencyError("canonical flower misplaces the orbit or contains 0", {"flower": F})
    return F


def complexity_adic(Y: Iterable, d: int, n: int) -> int:
    """How many d-adic intervals of length ``d**-n`` meet the invariant set ``Y``."""
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    pts = check_forward_invariant(Y, d)
    scale = d**n
    return len({(x * scale).__floor__() for x in pts})
