"""Periodic orbits of the expanding map, interlacing numbers, critical points."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable

from .exact import CirclePoint, antipode, as_fraction, circular_sort, expand
from .symbolic import check_word, enumerate_lyndon


@dataclass(frozen=True)
class PeriodicOrbit:
    word: str
    d: int
    points: tuple[CirclePoint, ...]

    @property
    def period(self) -> int:
        return len(self.word)

    @property
    def is_fixed_point(self) -> bool:
        return self.points == (Fraction(0),)

    def antiorbit(self) -> tuple[CirclePoint, ...]:
        return tuple(antipode(x) for x in self.points)


def orbit_from_word(word: str, d: int = 2) -> PeriodicOrbit:
    """The periodic orbit whose d-adic itinerary is the cyclic word ``word``.

    The first point is ``k / (d**p - 1)`` with ``k`` the word read in base d.
    All-top-symbol words such as ``"1"`` give ``k = d**p - 1``, i.e. the point 0.
    """
    check_word(word, d)
    p = len(word)
    k = int(word, d)
    x = Fraction(k, d**p - 1) % 1
    pts = [x]
    for _ in range(p - 1):
        pts.append(expand(pts[-1], d))
    if expand(pts[-1], d) != pts[0]:
        raise AssertionError(f"orbit of {word!r} failed to close")
    # "11", "0101", ... collapse onto a shorter cycle; keep the distinct points
    seen = []
    for q in pts:
        if q in seen:
            break
        seen.append(q)
    return PeriodicOrbit(word, d, tuple(seen))


def interlacing_number(orbit: PeriodicOrbit) -> int:
    """Number of maximal circular blocks of orbit points amid the antiorbit.

    Traversing the circle once switches between orbit and antiorbit twice
    per block, so this is half the switch count.
    """
    if orbit.d != 2:
        raise ValueError("interlacing numbers are defined for the doubling map only")
    labelled = [(x, "O") for x in orbit.points] + [(x, "A") for x in orbit.antiorbit()]
    ordered = circular_sort(labelled)
    if ordered.has_duplicates:
        raise ValueError(f"orbit {orbit.word!r} meets its antiorbit")
    labels = ordered.labels
    n = len(labels)
    switches = sum(1 for i in range(n) if labels[i] != labels[(i + 1) % n])
    return switches // 2


@dataclass(frozen=True)
class TallyRow:
    interlacing: int
    count: int
    simplest: str


@lru_cache(maxsize=None)
def all_orbits(max_period: int, d: int = 2) -> tuple[PeriodicOrbit, ...]:
    """Orbits of every Lyndon word up to ``max_period``, in (period, word) order."""
    return tuple(orbit_from_word(w, d) for w in enumerate_lyndon(d, max_period))


def interlacing_tally(max_period: int) -> dict[int, TallyRow]:
    if max_period < 1:
        raise ValueError(f"max_period must be >= 1, got {max_period}")
    rows: dict[int, TallyRow] = {}
    for orbit in all_orbits(max_period):
        k = interlacing_number(orbit)
        row = rows.get(k)
        # enumeration order is already (period, lexicographic)
        rows[k] = TallyRow(k, 1, orbit.word) if row is None else TallyRow(k, row.count + 1, row.simplest)
    return dict(sorted(rows.items()))


def check_forward_invariant(K: Iterable, d: int) -> frozenset[CirclePoint]:
    pts = frozenset(as_fraction(x) % 1 for x in K)
    escaped = sorted(x for x in pts if expand(x, d) not in pts)
    if escaped:
        raise ValueError(f"set is not forward-invariant under E_{d}: {escaped[0]} leaves it")
    return pts


def critical_points(K: Iterable, d: int = 2) -> frozenset[CirclePoint]:
    """Points of a finite invariant set with more than one preimage in it."""
    pts = check_forward_invariant(K, d)
    out = set()
    for x in pts:
        pre = [(x + j) / d for j in range(d)]
        if sum(1 for y in pre if y in pts) > 1:
            out.add(x)
    return frozenset(out)
