"""Words over {0, ..., d-1}: Lyndon enumeration, d-adic coding, complexity.

Words are plain strings of base-36 digits, so ``"0011"`` is both the value
and its serialization.
"""
from __future__ import annotations

import string
from dataclasses import dataclass
from typing import Iterable

from .exact import as_fraction

DIGITS = string.digits + string.ascii_lowercase


def _check_alphabet(d: int) -> None:
    if not 2 <= d <= len(DIGITS):
        raise ValueError(f"alphabet size must be in [2, {len(DIGITS)}], got {d}")


def check_word(word: str, d: int) -> str:
    _check_alphabet(d)
    if not word:
        raise ValueError("words must be non-empty")
    allowed = DIGITS[:d]
    bad = sorted({c for c in word if c not in allowed})
    if bad:
        raise ValueError(f"word {word!r} has symbols {bad} outside alphabet of size {d}")
    return word


def least_rotation(word: str) -> str:
    return min(word[i:] + word[:i] for i in range(len(word)))


def primitive_root(word: str) -> str:
    """Shortest ``u`` with ``word == u * k``."""
    n = len(word)
    for p in range(1, n + 1):
        if n % p == 0 and word[:p] * (n // p) == word:
            return word[:p]
    return word  # unreachable


def is_lyndon(word: str) -> bool:
    return primitive_root(word) == word and least_rotation(word) == word


def lyndon_words(d: int, length: int) -> Iterable[str]:
    """Lyndon words of exactly ``length`` in lexicographic order (Duval)."""
    _check_alphabet(d)
    w = [-1]
    while w:
        w[-1] += 1
        if len(w) == length:
            yield "".join(DIGITS[s] for s in w)
        m = len(w)
        while len(w) < length:
            w.append(w[len(w) - m])
        while w and w[-1] == d - 1:
            w.pop()


def enumerate_lyndon(d: int, max_len: int) -> list[str]:
    """All Lyndon words of length 1..max_len, sorted by (length, word).

    Every length-1 word is Lyndon, so the top symbol ``d-1`` is included
    alongside ``0`` even though both label the fixed point 0 of the
    expanding map.
    """
    if max_len < 1:
        raise ValueError(f"max_len must be >= 1, got {max_len}")
    out = []
    for n in range(1, max_len + 1):
        out.extend(lyndon_words(d, n))
    return out


def coding(x, d: int, n: int) -> str:
    """First ``n`` symbols of the d-adic itinerary of ``x``.

    Symbol ``j`` at time ``t`` means ``E_d^t(x)`` lies in ``[j/d, (j+1)/d)``.
    """
    _check_alphabet(d)
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    x = as_fraction(x) % 1
    p, q = x.numerator, x.denominator
    out = []
    for _ in range(n):
        digit, p = divmod(d * p, q)
        out.append(DIGITS[digit])
    return "".join(out)


@dataclass(frozen=True)
class SymbolicOrbitSet:
    """Finitely many periodic orbits of the shift, one primitive generator each.

    Generators are stored as least rotations; the constructor normalizes
    rotations but refuses non-primitive words.
    """

    generators: tuple[str, ...]
    d: int = 2

    def __post_init__(self):
        normalized = []
        for word in self.generators:
            check_word(word, self.d)
            if primitive_root(word) != word:
                raise ValueError(f"generator {word!r} is a power of {primitive_root(word)!r}")
            normalized.append(least_rotation(word))
        object.__setattr__(self, "generators", tuple(sorted(set(normalized))))

    @classmethod
    def of(cls, *words: str, d: int = 2) -> "SymbolicOrbitSet":
        return cls(tuple(words), d)


def _as_generators(S) -> tuple[str, ...]:
    if isinstance(S, SymbolicOrbitSet):
        return S.generators
    if isinstance(S, str):
        return (S,)
    return tuple(S)


def cyclic_factors(word: str, n: int) -> set[str]:
    """Length-n factors of the bi-infinite repetition of ``word``."""
    p = len(word)
    reps = -(-(n + p) // p)
    tiled = word * reps
    return {tiled[i:i + n] for i in range(p)}


def linear_factors(words: Iterable[str], n: int) -> set[str]:
    """Length-n factors occurring inside finite words (no wraparound)."""
    out = set()
    for w in words:
        out.update(w[i:i + n] for i in range(len(w) - n + 1))
    return out


def word_complexity(S, n: int) -> int:
    """Number of distinct length-n factors of the subshift generated by ``S``.

    ``S`` is a :class:`SymbolicOrbitSet`, a single word, or an iterable of
    words; each word is repeated bi-infinitely and the factor sets are united.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    factors: set[str] = set()
    for word in _as_generators(S):
        factors |= cyclic_factors(word, n)
    return len(factors)


def is_sturmian_complexity(S, n_max: int) -> bool:
    return all(word_complexity(S, n) <= n + 1 for n in range(1, n_max + 1))
