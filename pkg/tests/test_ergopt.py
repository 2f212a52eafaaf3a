import csv
import math
import random
from fractions import Fraction as F

import numpy as np
import pytest

from flowerdyn.ergopt import (
    ExperimentConfig, TrigPoly, eval_poly, integrate_orbit, orbit_table, pseudo_maximizer, reduce_to_odd,
    run_experiment, sample_rng, sample_sphere,
)
from flowerdyn.orbits import all_orbits, orbit_from_word

COS = TrigPoly(((1, 1.0, 0.0),))


def test_eval_examples():
    assert eval_poly(COS, 0) == 1.0
    assert eval_poly(TrigPoly(), F(1, 7)) == 0.0
    assert eval_poly(COS, F(1, 2)) == -1.0


def test_reduce_to_odd_examples():
    assert reduce_to_odd(TrigPoly(((2, 1, 0),))).as_dict() == {1: (1.0, 0.0)}
    assert reduce_to_odd(TrigPoly(((4, 0, 1),))).as_dict() == {1: (0.0, 1.0)}
    assert reduce_to_odd(TrigPoly(((3, 1, 1),))).as_dict() == {3: (1.0, 1.0)}
    assert reduce_to_odd(TrigPoly(((1, 1, 0), (2, 2, 0), (6, 0, 3)))).as_dict() == {1: (3.0, 0.0), 3: (0.0, 3.0)}


def test_integrate_examples():
    assert integrate_orbit(COS, orbit_from_word("0")) == 1.0
    assert integrate_orbit(COS, orbit_from_word("01")) == pytest.approx(-0.5, abs=1e-15)
    assert integrate_orbit(TrigPoly(), orbit_from_word("0011")) == 0.0


def test_table_integrals_match_direct_sums():
    rng = random.Random(1)
    table = orbit_table(10)
    for _ in range(10):
        f = TrigPoly(tuple((k, rng.gauss(0, 1), rng.gauss(0, 1)) for k in (1, 2, 3, 5)))
        fast = table.integrals(f)
        slow = [integrate_orbit(f, o) for o in table.orbits]
        assert np.allclose(fast, slow, atol=1e-12)


def test_pseudo_maximizer_examples():
    r = pseudo_maximizer(COS)
    assert r.orbit.word == "0" and r.value == pytest.approx(1.0) and r.interlacing == 1
    neg = TrigPoly(((1, -1.0, 0.0),))
    r = pseudo_maximizer(neg)
    vals = [integrate_orbit(neg, o) for o in all_orbits(14)]
    assert r.value == pytest.approx(max(vals), abs=1e-12)
    assert r.orbit == all_orbits(14)[int(np.argmax(vals))]
    z = pseudo_maximizer(TrigPoly())
    assert z.orbit.word == "0" and z.value == 0.0 and z.tie


def test_maximizer_invariant_under_positive_scaling():
    rng = np.random.Generator(np.random.PCG64(3))
    for _ in range(50):
        f = sample_sphere(5, rng)
        c = float(rng.uniform(0.1, 10))
        assert pseudo_maximizer(f, 10).orbit == pseudo_maximizer(f.scaled(c), 10).orbit


def test_sample_sphere_shapes_and_norm():
    for degree, n in ((3, 4), (5, 6), (1, 2)):
        f = sample_sphere(degree, sample_rng(42, 0))
        coeffs = [c for _, a, b in f.terms for c in (a, b)]
        assert len(coeffs) == n
        assert f.frequencies == tuple(range(1, degree + 1, 2))
        assert math.isclose(math.sqrt(sum(c * c for c in coeffs)), 1.0, abs_tol=1e-12)
    assert sample_sphere(3, sample_rng(42, 7)) == sample_sphere(3, sample_rng(42, 7))
    with pytest.raises(ValueError):
        sample_sphere(4, sample_rng(0, 0))


def test_config_validation():
    with pytest.raises(ValueError):
        ExperimentConfig(degree=2)
    with pytest.raises(ValueError):
        ExperimentConfig(samples=0)


def test_experiment_is_independent_of_threads(tmp_path):
    base = ExperimentConfig(degree=3, samples=700, max_period=10, seed=9, threads=1)
    one = run_experiment(base, log_csv=tmp_path / "one.csv")
    many = run_experiment(ExperimentConfig(degree=3, samples=700, max_period=10, seed=9, threads=4),
                          log_csv=tmp_path / "many.csv")
    assert one.records == many.records and one.tally == many.tally
    assert (tmp_path / "one.csv").read_bytes() == (tmp_path / "many.csv").read_bytes()


def test_experiment_records_match_pseudo_maximizer(tmp_path):
    cfg = ExperimentConfig(degree=3, samples=40, max_period=10, seed=5)
    result = run_experiment(cfg, log_csv=tmp_path / "log.csv")
    for rec in result.records:
        r = pseudo_maximizer(TrigPoly.from_vector(3, rec.coefficients), 10)
        assert rec.word == r.orbit.word
    rows = list(csv.reader(open(tmp_path / "log.csv")))
    assert rows[0] == ["sample_id", "a1", "b1", "a3", "b3", "argmax_word", "integral", "interlacing", "tie"]
    assert len(rows) == 41
    assert sum(result.tally.values()) == 40


def test_degree_one_is_always_sturmian():
    result = run_experiment(ExperimentConfig(degree=1, samples=200, max_period=12, seed=1))
    assert set(result.tally) == {1}


def test_cohomology_invariance_small():
    rng = random.Random(2)
    for _ in range(20):
        f = TrigPoly(tuple((k, rng.gauss(0, 1), rng.gauss(0, 1)) for k in range(1, 9)))
        g = reduce_to_odd(f)
        for o in all_orbits(8):
            assert abs(integrate_orbit(f, o) - integrate_orbit(g, o)) <= 1e-9
