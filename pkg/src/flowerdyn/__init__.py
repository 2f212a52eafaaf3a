"""Flowers of expanding circle maps, deck-shuffler interval exchanges and low-complexity orbits."""
from .bridge import CdfMap, OrbitMeasure, cdf, iet_from_flower, round_trip, uniform
from .errors import InternalConsistencyError
from .exact import antipode, circular_sort, expand
from .flower import Arc, Flower, flower_from_orbit, maximal_invariant_approx, preimage_select, validate_flower
from .iet import DeckShuffler, Iet, ab_coding, deck_shuffler, flower_from_iet, h_graph, iet_apply, keane_check
from .orbits import PeriodicOrbit, interlacing_number, interlacing_tally, orbit_from_word
from .symbolic import coding, enumerate_lyndon, word_complexity

__version__ = "0.1.0"

__all__ = [
    "Arc", "CdfMap", "DeckShuffler", "Flower", "Iet", "InternalConsistencyError", "OrbitMeasure", "PeriodicOrbit",
    "ab_coding", "antipode", "cdf", "circular_sort", "coding", "deck_shuffler", "enumerate_lyndon", "expand",
    "flower_from_iet", "flower_from_orbit", "h_graph", "iet_apply", "iet_from_flower", "interlacing_number",
    "interlacing_tally", "keane_check", "maximal_invariant_approx", "orbit_from_word", "preimage_select",
    "round_trip", "uniform", "validate_flower", "word_complexity",
]
