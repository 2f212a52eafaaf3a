"""Pseudo-maximizing periodic orbits of random trigonometric polynomials."""
from __future__ import annotations

import csv
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Mapping

import numpy as np

from .orbits import PeriodicOrbit, all_orbits, interlacing_number

TIE_TOLERANCE = 1e-12
CHUNK = 256


@dataclass(frozen=True)
class TrigPoly:
    """``sum_k a_k cos(2 pi k x) + b_k sin(2 pi k x)`` over frequencies ``k >= 1``."""

    terms: tuple[tuple[int, float, float], ...] = ()

    def __post_init__(self):
        merged: dict[int, list[float]] = {}
        for k, a, b in self.terms:
            if int(k) != k or k < 1:
                raise ValueError(f"frequencies must be positive integers, got {k}")
            acc = merged.setdefault(int(k), [0.0, 0.0])
            acc[0] += float(a)
            acc[1] += float(b)
        object.__setattr__(self, "terms", tuple((k, a, b) for k, (a, b) in sorted(merged.items())))

    @classmethod
    def from_dict(cls, coeffs: Mapping[int, tuple[float, float]]) -> "TrigPoly":
        return cls(tuple((k, a, b) for k, (a, b) in coeffs.items()))

    @classmethod
    def from_vector(cls, degree: int, vector: Iterable[float]) -> "TrigPoly":
        """Odd-frequency polynomial from ``(a1, b1, a3, b3, ..., a_deg, b_deg)``."""
        v = list(vector)
        freqs = odd_frequencies(degree)
        if len(v) != 2 * len(freqs):
            raise ValueError(f"degree {degree} needs {2 * len(freqs)} coefficients, got {len(v)}")
        return cls(tuple((k, v[2 * i], v[2 * i + 1]) for i, k in enumerate(freqs)))

    def as_dict(self) -> dict[int, tuple[float, float]]:
        return {k: (a, b) for k, a, b in self.terms}

    @property
    def frequencies(self) -> tuple[int, ...]:
        return tuple(k for k, _, _ in self.terms)

    def scaled(self, c: float) -> "TrigPoly":
        return TrigPoly(tuple((k, c * a, c * b) for k, a, b in self.terms))

    def __call__(self, x) -> float:
        return eval_poly(self, x)


def odd_frequencies(degree: int) -> tuple[int, ...]:
    if degree < 1 or degree % 2 == 0:
        raise ValueError(f"degree must be odd and >= 1, got {degree}")
    return tuple(range(1, degree + 1, 2))


def eval_poly(f: TrigPoly, x) -> float:
    t = 2 * math.pi * float(x)
    return sum(a * math.cos(k * t) + b * math.sin(k * t) for k, a, b in f.terms)


def reduce_to_odd(f: TrigPoly) -> TrigPoly:
    """Move every even frequency ``2k`` onto ``k`` until all frequencies are odd.

    ``g(2x)`` and ``g(x)`` differ by a coboundary of the doubling map, so the
    result has the same integral against every invariant measure.
    """
    out = []
    for k, a, b in f.terms:
        while k % 2 == 0:
            k //= 2
        out.append((k, a, b))
    return TrigPoly(tuple(out))


def integrate_orbit(f: TrigPoly, o: PeriodicOrbit) -> float:
    return sum(eval_poly(f, x) for x in o.points) / len(o.points)


class OrbitTable:
    """Orbits up to a period with their orbit averages of cos/sin monomials."""

    def __init__(self, max_period: int = 14):
        self.max_period = max_period
        self.orbits = all_orbits(max_period)
        self.interlacing = np.array([interlacing_number(o) for o in self.orbits], dtype=np.int64)
        seen = set()
        distinct = []
        for o in self.orbits:
            distinct.append(o.points not in seen)
            seen.add(o.points)
        # "0" and "1" both name the fixed point; only the first counts for ties
        self.distinct = np.array(distinct)
        self._points = np.array([float(x) for o in self.orbits for x in o.points])
        sizes = [len(o.points) for o in self.orbits]
        self._starts = np.cumsum([0] + sizes[:-1])
        self._sizes = np.array(sizes, dtype=float)
        self._cache: dict[tuple[int, ...], np.ndarray] = {}

    def __len__(self) -> int:
        return len(self.orbits)

    def moments(self, freqs: tuple[int, ...]) -> np.ndarray:
        """Matrix with rows per orbit and columns ``cos k1, sin k1, cos k2, ...`` averages."""
        if freqs not in self._cache:
            cols = []
            for k in freqs:
                t = 2 * np.pi * k * self._points
                cols.append(np.add.reduceat(np.cos(t), self._starts) / self._sizes)
                cols.append(np.add.reduceat(np.sin(t), self._starts) / self._sizes)
            self._cache[freqs] = np.column_stack(cols) if cols else np.zeros((len(self), 0))
        return self._cache[freqs]

    def integrals(self, f: TrigPoly) -> np.ndarray:
        coeffs = np.array([c for _, a, b in f.terms for c in (a, b)])
        return self.moments(f.frequencies) @ coeffs if f.terms else np.zeros(len(self))


@lru_cache(maxsize=4)
def orbit_table(max_period: int = 14) -> OrbitTable:
    return OrbitTable(max_period)


@dataclass(frozen=True)
class MaximizerResult:
    orbit: PeriodicOrbit
    value: float
    interlacing: int
    tie: bool = False


def _argmax_rows(values: np.ndarray, distinct: np.ndarray):
    top = values.max(axis=1, keepdims=True)
    near = values >= top - TIE_TOLERANCE
    first = near.argmax(axis=1)
    ties = (near & distinct).sum(axis=1) > 1
    return first, ties


def pseudo_maximizer(f: TrigPoly, max_period: int = 14) -> MaximizerResult:
    """Orbit with the largest integral; near-ties go to the first in (period, word) order."""
    table = orbit_table(max_period)
    vals = table.integrals(f)[None, :]
    first, ties = _argmax_rows(vals, table.distinct)
    i = int(first[0])
    return MaximizerResult(table.orbits[i], float(vals[0, i]), int(table.interlacing[i]), bool(ties[0]))


def sample_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, index])))


def sample_vector(degree: int, rng: np.random.Generator) -> np.ndarray:
    n = 2 * len(odd_frequencies(degree))
    g = rng.standard_normal(n)
    return g / np.linalg.norm(g)


def sample_sphere(degree: int, rng: np.random.Generator) -> TrigPoly:
    """Uniform point on the unit sphere of odd-frequency coefficient vectors."""
    return TrigPoly.from_vector(degree, sample_vector(degree, rng))


@dataclass(frozen=True)
class ExperimentConfig:
    degree: int = 3
    samples: int = 1000
    max_period: int = 14
    seed: int = 0
    threads: int = 1

    def __post_init__(self):
        odd_frequencies(self.degree)
        if self.samples < 1:
            raise ValueError(f"samples must be >= 1, got {self.samples}")
        if self.max_period < 1:
            raise ValueError(f"max_period must be >= 1, got {self.max_period}")
        if self.threads < 1:
            raise ValueError(f"threads must be >= 1, got {self.threads}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")


@dataclass(frozen=True)
class SampleRecord:
    sample_id: int
    coefficients: tuple[float, ...]
    word: str
    value: float
    interlacing: int
    tie: bool


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    tally: dict[int, int]
    records: list[SampleRecord] = field(default_factory=list)

    @property
    def ties(self) -> int:
        return sum(r.tie for r in self.records)

    def fraction(self, interlacing: int) -> float:
        return self.tally.get(interlacing, 0) / self.config.samples

    def write_csv(self, path) -> None:
        freqs = odd_frequencies(self.config.degree)
        header = ["sample_id"] + [f"{c}{k}" for k in freqs for c in ("a", "b")]
        header += ["argmax_word", "integral", "interlacing", "tie"]
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            for r in self.records:
                w.writerow([r.sample_id, *map(repr, r.coefficients), r.word, repr(r.value), r.interlacing, int(r.tie)])


def _run_chunk(cfg: ExperimentConfig, table: OrbitTable, moments: np.ndarray, start: int) -> list[SampleRecord]:
    ids = range(start, min(start + CHUNK, cfg.samples))
    coeffs = np.array([sample_vector(cfg.degree, sample_rng(cfg.seed, i)) for i in ids])
    vals = coeffs @ moments.T
    first, ties = _argmax_rows(vals, table.distinct)
    out = []
    for row, i in enumerate(ids):
        j = int(first[row])
        out.append(SampleRecord(i, tuple(float(c) for c in coeffs[row]), table.orbits[j].word,
                                float(vals[row, j]), int(table.interlacing[j]), bool(ties[row])))
    return out


def run_experiment(cfg: ExperimentConfig, log_csv=None) -> ExperimentResult:
    """Tally interlacing numbers of pseudo-maximizers over seeded random samples.

    Sample ``i`` draws from its own stream seeded by ``(seed, i)`` and the
    samples are batched in fixed chunks, so results do not depend on
    ``threads``.
    """
    table = orbit_table(cfg.max_period)
    moments = table.moments(odd_frequencies(cfg.degree))
    starts = range(0, cfg.samples, CHUNK)
    if cfg.threads == 1:
        chunks = [_run_chunk(cfg, table, moments, s) for s in starts]
    else:
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            chunks = list(pool.map(lambda s: _run_chunk(cfg, table, moments, s), starts))
    records = [r for chunk in chunks for r in chunk]
    tally: dict[int, int] = {}
    for r in records:
        tally[r.interlacing] = tally.get(r.interlacing, 0) + 1
    result = ExperimentResult(cfg, dict(sorted(tally.items())), records)
    if log_csv is not None:
        result.write_csv(log_csv)
    return result
