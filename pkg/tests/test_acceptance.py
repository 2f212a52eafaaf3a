"""Acceptance gate: one test per criterion, each at its stated tolerance and time budget.

Every criterion reports a PASS/FAIL line; pytest prints them in the terminal
summary, and running this file directly prints them as it goes.
"""
import random
import time
from contextlib import contextmanager
from fractions import Fraction as F

import pytest

from flowerdyn.bridge import round_trip
from flowerdyn.ergopt import ExperimentConfig, TrigPoly, integrate_orbit, reduce_to_odd, run_experiment
from flowerdyn.exact import circular_distance
from flowerdyn.flower import complexity_adic, validate_flower
from flowerdyn.iet import (
    ab_coding, deck_shuffler, example3_shuffler, flower_from_iet, h_graph, h_value, iet_apply,
)
from flowerdyn.orbits import all_orbits, interlacing_number, interlacing_tally
from flowerdyn.symbolic import enumerate_lyndon, is_sturmian_complexity, linear_factors

from .strategies import random_deck_shuffler

RESULTS: list[str] = []


@contextmanager
def criterion(n: int, title: str, budget: float | None = None):
    start = time.perf_counter()
    try:
        yield
        elapsed = time.perf_counter() - start
        if budget is not None and elapsed >= budget:
            raise AssertionError(f"took {elapsed:.1f}s, budget {budget:.0f}s")
    except BaseException as exc:
        elapsed = time.perf_counter() - start
        line = f"[{n:2d}] FAIL {title} ({elapsed:.1f}s): {exc}"
        RESULTS.append(line)
        print(line)
        raise
    line = f"[{n:2d}] PASS {title} ({elapsed:.1f}s)"
    RESULTS.append(line)
    print(line)


def test_c01_orbit_census_and_tally():
    with criterion(1, "orbit census 2538 and interlacing tally", budget=10):
        all_orbits.cache_clear()
        assert len(enumerate_lyndon(2, 14)) == 2538
        tally = interlacing_tally(14)
        assert {k: (r.count, r.simplest) for k, r in tally.items()} == {
            1: (65, "0"), 3: (470, "0011"), 5: (1006, "0001101"),
            7: (742, "000100111"), 9: (227, "0001011101"), 11: (28, "000100111011"),
        }


def test_c02_example1_plateaus():
    with criterion(2, "example 1 plateau values and period 5"):
        g = h_graph(deck_shuffler(["2/5", "1/5", "1/5", "1/5"]))
        assert [p.value for p in g.plateaus] == [F(k, 31) for k in (3, 6, 12, 17, 24)]
        assert {p.period for p in g.plateaus} == {5}


def test_c03_example2_plateaus_and_flower():
    with criterion(3, "example 2 plateau values, periods 4/6, single 3-flower"):
        T = deck_shuffler(["3/10", "2/10", "2/10", "3/10"])
        g = h_graph(T)
        fifths = [F(k, 5) for k in (1, 2, 4, 3)]
        ninths = [F(k, 9) for k in (1, 2, 4, 8, 7, 5)]
        assert [p.value for p in g.plateaus] == sorted(fifths + ninths)
        assert all(p.period == (4 if p.value in fifths else 6) for p in g.plateaus)
        fl = flower_from_iet(T)
        assert len(fl.petals) == 3 and validate_flower(fl) == []
        assert all(fl.contains(x) for x in fifths + ninths)


def test_c04_example3_bounded_precision():
    with criterion(4, "example 3 at depth 60: 1/3, 2/3, Sturmian factors, 2/3 petal", budget=30):
        depth = 60
        T = example3_shuffler()
        b2 = T.endpoints[3]
        top = ab_coding(T, b2, depth)
        bottom = ab_coding(T, iet_apply(T, b2), depth)
        tol = F(1, 2**58)
        assert abs(bottom.value - F(1, 3)) <= tol and abs(top.value - F(2, 3)) <= tol
        codes = []
        for i in range(400):
            c = ab_coding(T, F(i, 400), depth)
            if c.cycle is None:
                codes.append(c.prefix)
        # the complementary component has measure 1/2
        assert len(codes) >= 100
        for n in range(1, 13):
            assert len(linear_factors(codes, n)) <= n + 1, n
        fl = flower_from_iet(T, depth)
        assert len(fl.petals) == 3
        smallest = min(fl.petals, key=lambda p: p.length)
        two_thirds = F(2, 3)
        if smallest.contains(two_thirds):
            distance = F(0)
        else:
            distance = min(circular_distance(two_thirds, smallest.left), circular_distance(smallest.right, two_thirds))
        assert distance <= F(1, 2**40)


def test_c05_round_trip_all_orbits():
    with criterion(5, "round trip for all orbits up to period 14", budget=120):
        failures = []
        count = 0
        for o in all_orbits(14):
            if o.is_fixed_point:
                continue
            count += 1
            r = round_trip(o)
            if not r.ok:
                failures.append(r.word)
        assert count == 2536
        assert failures == []


def test_c06_complexity_bound():
    with criterion(6, "complexity increments <= interlacing"):
        bad = []
        for o in all_orbits(14):
            p = interlacing_number(o)
            c = [complexity_adic(o.points, 2, n) for n in range(1, 16)]
            for n in range(1, 15):
                if c[n] - c[n - 1] > p or c[n - 1] > p * n + c[0]:
                    bad.append((o.word, n))
        assert bad == []


def test_c07_sturmian_equivalence():
    with criterion(7, "interlacing 1 iff Sturmian complexity"):
        bad = [o.word for o in all_orbits(14)
               if (interlacing_number(o) == 1) != is_sturmian_complexity(o.word, o.period)]
        assert bad == []


def test_c08_monotonicity_and_intertwining_fuzz():
    with criterion(8, "H monotone and intertwining on 500 random shufflers"):
        rng = random.Random(20240608)
        bad = []
        for _ in range(500):
            T = random_deck_shuffler(rng, max_m=4, max_denominator=60)
            q = T.denominator * rng.randrange(1, 8)
            for _ in range(100):
                x, y = sorted(F(rng.randrange(q), q) for _ in range(2))
                hx, hy = h_value(T, x), h_value(T, y)
                if hx > hy:
                    bad.append(("monotone", T, x, y))
                if h_value(T, iet_apply(T, x)) != (2 * hx) % 1:
                    bad.append(("intertwine", T, x))
        assert bad == []


def test_c09_ergodic_optimization():
    with criterion(9, "pseudo-maximizer interlacing bounded by degree", budget=300):
        r3 = run_experiment(ExperimentConfig(degree=3, samples=5000, seed=42, threads=4))
        assert max(r3.tally) <= 3
        assert 0.15 <= r3.fraction(3) <= 0.30, r3.tally
        r5 = run_experiment(ExperimentConfig(degree=5, samples=1000, seed=42, threads=4))
        assert max(r5.tally) <= 5
        r1 = run_experiment(ExperimentConfig(degree=1, samples=1000, seed=42, threads=4))
        assert set(r1.tally) == {1}


def test_c10_cohomology_reduction():
    with criterion(10, "integrals unchanged by reduction to odd frequencies"):
        rng = random.Random(77)
        orbits = all_orbits(10)
        worst = 0.0
        for _ in range(200):
            freqs = rng.sample(range(1, 17), 5)
            if all(k % 2 for k in freqs):
                freqs[0] = 2 * freqs[0]
            f = TrigPoly(tuple((k, rng.gauss(0, 1), rng.gauss(0, 1)) for k in freqs))
            g = reduce_to_odd(f)
            for o in orbits:
                worst = max(worst, abs(integrate_orbit(f, o) - integrate_orbit(g, o)))
        assert worst <= 1e-9, worst


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
