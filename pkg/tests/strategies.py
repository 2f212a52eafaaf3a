"""Shared random generators for flowers and deck shufflers."""
import random
from fractions import Fraction as F

from flowerdyn.flower import Arc, Flower
from flowerdyn.iet import DeckShuffler


def random_flower(rng: random.Random, max_petals: int = 7, denom: int = 240) -> Flower:
    """Odd petal count from a cut set symmetric under x -> x + 1/2."""
    p = rng.randrange(1, max_petals + 1, 2)
    cuts = sorted(F(k, denom) for k in rng.sample(range(denom // 2), p))
    cuts = cuts + [c + F(1, 2) for c in cuts]
    start = rng.randrange(2)
    petals = [Arc(cuts[i], cuts[(i + 1) % (2 * p)]) for i in range(start, 2 * p, 2)]
    return Flower(tuple(petals))


def random_deck_shuffler(rng: random.Random, max_m: int = 3, max_denominator: int = 60) -> DeckShuffler:
    m = rng.randrange(1, max_m + 1)
    q = rng.randrange(2 * m, max_denominator + 1)
    cuts = sorted(rng.sample(range(1, q), 2 * m - 1))
    bounds = [0] + cuts + [q]
    return DeckShuffler([F(b - a, q) for a, b in zip(bounds, bounds[1:])])
