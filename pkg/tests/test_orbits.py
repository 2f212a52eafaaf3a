from fractions import Fraction as F
from itertools import combinations

import pytest

from flowerdyn.exact import antipode, expand
from flowerdyn.orbits import (
    all_orbits, check_forward_invariant, critical_points, interlacing_number, interlacing_tally, orbit_from_word,
)
from flowerdyn.symbolic import is_sturmian_complexity


def test_orbit_examples():
    assert set(orbit_from_word("0011").points) == {F(1, 5), F(2, 5), F(4, 5), F(3, 5)}
    assert orbit_from_word("0").points == (F(0),)
    assert orbit_from_word("1").points == (F(0),)
    assert orbit_from_word("0001101").points == tuple(F(k, 127) for k in (13, 26, 52, 104, 81, 35, 70))


def test_orbit_rejects_bad_words():
    with pytest.raises(ValueError):
        orbit_from_word("012")
    with pytest.raises(ValueError):
        orbit_from_word("")


def test_orbit_in_base_three():
    o = orbit_from_word("012", 3)
    assert o.points[0] == F(5, 26)
    assert expand(o.points[-1], 3) == o.points[0]


def _blocks_oracle(orbit):
    # count orbit points whose counterclockwise predecessor is an antiorbit point
    pts = sorted([(x, 1) for x in orbit.points] + [(antipode(x), 0) for x in orbit.points])
    return sum(1 for i in range(len(pts)) if pts[i][1] == 1 and pts[i - 1][1] == 0)


def test_interlacing_examples():
    assert interlacing_number(orbit_from_word("0011")) == 3
    assert interlacing_number(orbit_from_word("0")) == 1
    assert interlacing_number(orbit_from_word("0001101")) == 5


def test_interlacing_matches_oracle_and_is_odd():
    for o in all_orbits(14):
        k = interlacing_number(o)
        assert k % 2 == 1
        assert k == _blocks_oracle(o)


def test_orbits_never_meet_their_antiorbit():
    for o in all_orbits(14):
        assert not set(o.points) & set(o.antiorbit())


def test_tally_examples():
    t = interlacing_tally(14)
    assert {k: (r.count, r.simplest) for k, r in t.items()} == {
        1: (65, "0"), 3: (470, "0011"), 5: (1006, "0001101"),
        7: (742, "000100111"), 9: (227, "0001011101"), 11: (28, "000100111011"),
    }
    assert {k: (r.count, r.simplest) for k, r in interlacing_tally(1).items()} == {1: (2, "0")}
    small = interlacing_tally(4)
    assert small[1].count + small[3].count == 8
    assert (small[1].count, small[3].simplest) == (7, "0011")


def test_interlacing_one_iff_sturmian():
    for o in all_orbits(14):
        assert (interlacing_number(o) == 1) == is_sturmian_complexity(o.word, o.period)


def _critical_oracle(K):
    K = set(K)
    return {x for x in K if sum(1 for a, b in combinations(K, 2) if expand(a, 2) == x and expand(b, 2) == x) > 0}


def test_critical_points_of_single_orbits_are_empty():
    for o in all_orbits(10):
        assert critical_points(o.points) == frozenset()


def test_critical_points_examples():
    assert critical_points([0]) == frozenset()
    assert critical_points([0, F(1, 2)]) == {F(0)}
    K = orbit_from_word("0011").points + orbit_from_word("0001101").points
    assert critical_points(K) == _critical_oracle(K)


def test_critical_points_of_a_merged_set():
    # 1/3 and 5/6 both double to 2/3
    K = [F(1, 3), F(2, 3), F(5, 6)]
    assert critical_points(K) == {F(2, 3)} == _critical_oracle(K)


def test_non_invariant_sets_are_rejected():
    with pytest.raises(ValueError):
        critical_points([F(1, 5)])
    with pytest.raises(ValueError):
        check_forward_invariant([F(1, 3)], 2)
