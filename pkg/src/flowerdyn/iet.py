"""Interval exchange transformations and deck shufflers.

Lengths are always stored as Fractions.  An IET is *exact* when its lengths
are the intended rationals; it is *bounded-precision* when they are dyadic
(or float-derived) approximations of irrational data.  Arithmetic is exact in
both cases, on integers scaled by a common denominator.  Only the
interpretation differs: bounded-precision codings stop at a depth and carry
a ``2**-depth`` error bound, and Keane checks can end "undecided".
"""
from __future__ import annotations

import json
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt, lcm
from numbers import Rational
from typing import Sequence

from .errors import InternalConsistencyError
from .exact import HALF, as_fraction, fmt
from .flower import Arc, Flower, flower_from_cores, validate_flower

DEFAULT_DEPTH = 64
CELL_LIMIT = 1 << 20


def _is_exact_input(value) -> bool:
    return isinstance(value, (int, Rational, str))


class Iet:
    """An interval exchange on ``[0, 1)`` with left-closed, right-open pieces.

    ``permutation[k-1]`` is the position (1-based) that interval ``k``
    occupies after the map, so ``(2, 1, 3)`` swaps the first two pieces.
    """

    def __init__(self, lengths: Sequence, permutation: Sequence[int] | None = None, *,
                 exact: bool | None = None, precision: int | None = None):
        if len(lengths) < 1:
            raise ValueError("an IET needs at least one interval")
        if exact is None:
            exact = all(_is_exact_input(v) for v in lengths)
        if exact:
            ls = [as_fraction(v) for v in lengths]
            if sum(ls) != 1:
                raise ValueError(f"lengths sum to {fmt(sum(ls))}, not 1")
        else:
            ls = [v if isinstance(v, Fraction) else Fraction(v) for v in lengths]
            ls[-1] = 1 - sum(ls[:-1])
        if any(v <= 0 for v in ls):
            raise ValueError("all lengths must be positive")
        m = len(ls)
        perm = tuple(range(1, m + 1)) if permutation is None else tuple(int(p) for p in permutation)
        if sorted(perm) != list(range(1, m + 1)):
            raise ValueError(f"{perm} is not a permutation of 1..{m}")

        self.lengths: tuple[Fraction, ...] = tuple(ls)
        self.permutation: tuple[int, ...] = perm
        self.exact: bool = bool(exact)
        self.precision = precision
        self.m = m

        self.denominator = lcm(*(v.denominator for v in ls))
        D = self.denominator
        self._ends = [0]
        for v in ls:
            self._ends.append(self._ends[-1] + int(v * D))
        # image starts: sum of lengths of intervals placed before position tau(k)
        order = sorted(range(m), key=lambda k: perm[k])
        start = {}
        acc = 0
        for k in order:
            start[k] = acc
            acc += self._ends[k + 1] - self._ends[k]
        self._shift = [start[k] - self._ends[k] for k in range(m)]

    # -- geometry --------------------------------------------------------

    @property
    def endpoints(self) -> tuple[Fraction, ...]:
        """``0, l1, l1+l2, ..., 1``."""
        D = self.denominator
        return tuple(Fraction(e, D) for e in self._ends)

    @property
    def translations(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(s, self.denominator) for s in self._shift)

    def interval_of(self, x) -> int:
        """1-based index of the interval containing ``x``."""
        x = _unit(x)
        return bisect_right(self.endpoints, x)

    def _scaled(self, x: Fraction, left: bool = False):
        S = lcm(self.denominator, x.denominator)
        f = S // self.denominator
        ends = [e * f for e in self._ends]
        shift = [s * f for s in self._shift]
        y = x.numerator * (S // x.denominator)
        if left and y == 0:
            y = S
        return S, ends, shift, y

    def _step_fn(self, ends, left: bool):
        if left:
            return lambda y: bisect_left(ends, y) - 1
        return lambda y: bisect_right(ends, y) - 1

    def __call__(self, x) -> Fraction:
        return iet_apply(self, x)

    def to_json(self) -> dict:
        return {"lengths": [fmt(v) for v in self.lengths], "permutation": list(self.permutation)}

    def __repr__(self) -> str:
        mode = "" if self.exact else ", bounded"
        return f"{type(self).__name__}(({', '.join(fmt(v) for v in self.lengths)}), {self.permutation}{mode})"

    def __eq__(self, other):
        return (isinstance(other, Iet) and self.lengths == other.lengths
                and self.permutation == other.permutation and self.exact == other.exact)

    def __hash__(self):
        return hash((self.lengths, self.permutation, self.exact))


def deck_permutation(m: int) -> tuple[int, ...]:
    """Positions after one step: ``A_i`` lands in slot ``2i``, ``B_i`` in ``2i-1``."""
    return tuple(2 * i for i in range(1, m + 1)) + tuple(2 * i - 1 for i in range(1, m + 1))


class DeckShuffler(Iet):
    """A 2m-interval exchange with image order ``B1 A1 B2 A2 ... Bm Am``."""

    def __init__(self, lengths: Sequence, *, exact: bool | None = None, precision: int | None = None):
        if len(lengths) % 2 or not lengths:
            raise ValueError(f"a deck shuffler needs an even number of lengths, got {len(lengths)}")
        super().__init__(lengths, deck_permutation(len(lengths) // 2), exact=exact, precision=precision)
        self.m = len(lengths) // 2

    @property
    def intervals(self) -> int:
        return 2 * self.m

    @property
    def a_mass(self) -> Fraction:
        return sum(self.lengths[: self.m], Fraction(0))

    def in_b(self, x) -> bool:
        return _unit(x) >= self.a_mass

    def labels(self) -> list[str]:
        return [f"A{i}" for i in range(1, self.m + 1)] + [f"B{i}" for i in range(1, self.m + 1)]

    def to_json(self) -> dict:
        return {"lengths": [fmt(v) for v in self.lengths]}


def deck_shuffler(lengths: Sequence, **kwargs) -> DeckShuffler:
    return DeckShuffler(lengths, **kwargs)


def iet_from_json(data: dict | str) -> Iet:
    if isinstance(data, str):
        data = json.loads(data)
    lengths = [as_fraction(v) for v in data["lengths"]]
    if "permutation" in data and data["permutation"] is not None:
        perm = tuple(data["permutation"])
        if len(perm) % 2 == 0 and perm == deck_permutation(len(perm) // 2):
            return DeckShuffler(lengths)
        return Iet(lengths, perm)
    return DeckShuffler(lengths)


def _unit(x) -> Fraction:
    x = as_fraction(x)
    if not 0 <= x < 1:
        raise ValueError(f"point {fmt(x)} is outside [0, 1)")
    return x


def iet_apply(T: Iet, x) -> Fraction:
    x = _unit(x)
    S, ends, shift, y = T._scaled(x)
    k = bisect_right(ends, y) - 1
    return Fraction(y + shift[k], S)


def iterate(T: Iet, x, n: int) -> list[Fraction]:
    """``[x, T x, ..., T^n x]``."""
    x = _unit(x)
    S, ends, shift, y = T._scaled(x)
    out = [x]
    for _ in range(n):
        y += shift[bisect_right(ends, y) - 1]
        out.append(Fraction(y, S))
    return out


def natural_coding(T: Iet, x, n: int) -> tuple[int, ...]:
    """Interval indices (1-based) visited by ``x, T x, ..., T^{n-1} x``."""
    x = _unit(x)
    S, ends, shift, y = T._scaled(x)
    out = []
    for _ in range(n):
        k = bisect_right(ends, y) - 1
        out.append(k + 1)
        y += shift[k]
    return tuple(out)


def is_irreducible(T: Iet) -> bool:
    perm = T.permutation
    return not any(set(perm[:j]) == set(range(1, j + 1)) for j in range(1, T.m))


@dataclass(frozen=True)
class KeaneResult:
    status: str  # "satisfied" | "violation" | "undecided"
    endpoint: Fraction | None = None
    hit: Fraction | None = None
    step: int | None = None
    horizon: int = 0

    @property
    def violated(self) -> bool:
        return self.status == "violation"


def keane_check(T: Iet, horizon: int = 10_000) -> KeaneResult:
    """Look for an interior endpoint whose forward orbit hits an interior endpoint.

    Interior endpoints are the discontinuities ``l1, l1+l2, ...``.  Exact IETs
    have purely periodic orbits on a finite grid, so the search always
    terminates with a violation (or "satisfied" for the 1-interval identity
    where there is nothing to check).  Bounded-precision IETs stop at
    ``horizon`` and report "undecided" when nothing was found.
    """
    if horizon < 1:
        raise ValueError(f"horizon must be >= 1, got {horizon}")
    interior = T.endpoints[1:-1]
    if not interior:
        return KeaneResult("satisfied", horizon=horizon)
    S = lcm(*(e.denominator for e in interior), T.denominator)
    f = S // T.denominator
    ends = [e * f for e in T._ends]
    shift = [s * f for s in T._shift]
    targets = {e * f: i for i, e in enumerate(T._ends[1:-1])}
    current = [e * f for e in T._ends[1:-1]]
    step = 0
    limit = None if T.exact else horizon
    while limit is None or step < limit:
        step += 1
        for i, y in enumerate(current):
            y += shift[bisect_right(ends, y) - 1]
            current[i] = y
        for i, y in enumerate(current):
            if y in targets:
                return KeaneResult("violation", interior[i], Fraction(y, S), step, horizon)
    return KeaneResult("undecided", horizon=horizon)


@dataclass(frozen=True)
class CodingResult:
    """A/B itinerary of a point and the binary number it spells.

    With ``cycle`` set, the itinerary is ``prefix`` followed by ``cycle``
    repeated forever and ``value`` is exact.  Without it, ``prefix`` holds
    ``depth`` symbols and ``value`` undershoots the true number by at most
    ``error``.
    """

    prefix: str
    cycle: str | None
    value: Fraction
    error: Fraction = Fraction(0)

    @property
    def exact(self) -> bool:
        return self.cycle is not None

    @property
    def period(self) -> int | None:
        return None if self.cycle is None else len(self.cycle)

    def symbols(self, n: int) -> str:
        """First ``n`` itinerary symbols."""
        if self.cycle is None:
            if n > len(self.prefix):
                raise ValueError(f"only {len(self.prefix)} symbols known")
            return self.prefix[:n]
        out = self.prefix
        while len(out) < n:
            out += self.cycle
        return out[:n]


def binary_value(prefix: str, cycle: str | None) -> Fraction:
    """The number ``0.prefix(cycle)(cycle)...`` in base 2."""
    head = Fraction(int(prefix, 2) if prefix else 0, 1 << len(prefix))
    if cycle is None:
        return head
    tail = Fraction(int(cycle, 2), (1 << len(cycle)) - 1)
    return head + tail / (1 << len(prefix))


def ab_coding(T: DeckShuffler, x, depth: int = DEFAULT_DEPTH, *, left: bool = False) -> CodingResult:
    """The A/B itinerary of ``x`` (symbol 1 in B) and its binary value H(x).

    ``left=True`` codes the virtual point just left of ``x``, which gives
    the left limit of H at ``x``; ``x = 0`` then means the point just below 1.
    Exact IETs always find the cycle; bounded-precision ones look for it
    for ``depth`` steps and otherwise truncate.
    """
    x = _unit(x)
    S, ends, shift, y = T._scaled(x, left=left)
    locate = T._step_fn(ends, left)
    seen: dict[int, int] = {}
    symbols: list[str] = []
    limit = None if T.exact else depth
    while y not in seen and (limit is None or len(symbols) < limit):
        seen[y] = len(symbols)
        k = locate(y)
        symbols.append("1" if k >= T.m else "0")
        y += shift[k]
    word = "".join(symbols)
    if y in seen:
        start = seen[y]
        prefix, cycle = word[:start], word[start:]
        return CodingResult(prefix, cycle, binary_value(prefix, cycle))
    return CodingResult(word, None, binary_value(word, None), Fraction(1, 1 << len(word)))


def h_value(T: DeckShuffler, x, depth: int = DEFAULT_DEPTH, *, left: bool = False) -> Fraction:
    return ab_coding(T, x, depth, left=left).value


@dataclass(frozen=True)
class Plateau:
    start: Fraction
    end: Fraction
    value: Fraction
    cycle: str
    period: int


@dataclass(frozen=True)
class HGraph:
    """Step structure of H on ``[0, 1)``.

    ``plateaus`` are maximal intervals on which the itinerary never changes.
    For exact IETs they tile ``[0, 1)`` and ``samples`` is empty.  Otherwise
    plateaus are located only up to the sampling grid and the remaining grid
    points land in ``samples`` as ``(x, truncated H(x))``.
    """

    plateaus: tuple[Plateau, ...]
    samples: tuple[tuple[Fraction, Fraction], ...] = ()
    exact: bool = True
    error: Fraction = Fraction(0)

    @property
    def values(self) -> list[Fraction]:
        return sorted({p.value for p in self.plateaus})


def h_graph(T: DeckShuffler, resolution: int = 512, depth: int = DEFAULT_DEPTH) -> HGraph:
    if T.exact and T.denominator <= CELL_LIMIT:
        return _h_graph_cells(T)
    return _h_graph_sampled(T, resolution, depth)


def _h_graph_cells(T: DeckShuffler) -> HGraph:
    # Lengths are multiples of 1/D, so each cell [j/D, (j+1)/D) moves rigidly.
    D = T.denominator
    ends, shift = T._ends, T._shift
    b_start = ends[T.m]
    words: list[str | None] = [None] * D
    for j0 in range(D):
        if words[j0] is not None:
            continue
        cyc = [j0]
        j = j0 + shift[bisect_right(ends, j0) - 1]
        while j != j0:
            cyc.append(j)
            j += shift[bisect_right(ends, j) - 1]
        sym = "".join("1" if j >= b_start else "0" for j in cyc)
        for t, j in enumerate(cyc):
            words[j] = sym[t:] + sym[:t]

    plateaus = []
    j = 0
    while j < D:
        k = j
        while k + 1 < D and words[k + 1] == words[j]:
            k += 1
        w = words[j]
        plateaus.append(Plateau(Fraction(j, D), Fraction(k + 1, D), binary_value("", w), w, len(w)))
        j = k + 1
    return HGraph(tuple(plateaus))


def _h_graph_sampled(T: DeckShuffler, resolution: int, depth: int) -> HGraph:
    grid = [Fraction(i, resolution) for i in range(resolution)]
    codes = [ab_coding(T, x, depth) for x in grid]
    plateaus, samples = [], []
    i = 0
    while i < resolution:
        c = codes[i]
        if c.cycle is None:
            samples.append((grid[i], c.value))
            i += 1
            continue
        k = i
        while k + 1 < resolution and codes[k + 1].cycle is not None and codes[k + 1].value == c.value:
            k += 1
        end = grid[k + 1] if k + 1 < resolution else Fraction(1)
        plateaus.append(Plateau(grid[i], end, c.value, c.prefix + c.cycle, len(c.cycle)))
        i = k + 1
    return HGraph(tuple(plateaus), tuple(samples), exact=False, error=Fraction(1, 1 << depth))


@dataclass(frozen=True)
class Hull:
    label: str
    lo: Fraction
    hi: Fraction
    error: Fraction = Fraction(0)

    def shifted(self, t: Fraction) -> "Hull":
        return Hull(self.label, self.lo + t, self.hi + t, self.error)

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi


def interval_hulls(T: DeckShuffler, depth: int = DEFAULT_DEPTH) -> list[Hull]:
    """Closed hull ``[H(left), H(right-)]`` of H on each of the 2m intervals.

    H is increasing, so the hull of H on ``[c, e)`` is spanned by the value
    at ``c`` and the left limit at ``e``.
    """
    ends = T.endpoints
    out = []
    for k, label in enumerate(T.labels()):
        lo = ab_coding(T, ends[k], depth)
        hi = ab_coding(T, ends[k + 1] % 1, depth, left=True)
        err = max(lo.error, hi.error)
        out.append(Hull(label, lo.value, max(hi.value, lo.value), err))
    return out


@dataclass(frozen=True)
class ChainCheck:
    left: str
    right: str
    gap: Fraction


def inequality_chain(T: DeckShuffler, hulls: Sequence[Hull] | None = None, depth: int = DEFAULT_DEPTH):
    """Consecutive gaps of the ordered hull chain.

    The chain runs ``B1-1/2, A1, B2-1/2, A2, ..., Bm-1/2, Am, B1, A1+1/2,
    ..., Bm, Am+1/2`` and every gap (``lo`` of the next hull minus ``hi`` of
    the previous one) must be non-negative; ``0`` and ``1`` bracket it.
    """
    m = T.m
    hulls = list(hulls or interval_hulls(T, depth))
    A, B = hulls[:m], hulls[m:]
    chain = []
    for i in range(m):
        chain += [B[i].shifted(-HALF), A[i]]
    for i in range(m):
        chain += [B[i], A[i].shifted(HALF)]
    checks = [ChainCheck("0", chain[0].label + "-1/2", chain[0].lo)]
    for prev, nxt in zip(chain, chain[1:]):
        checks.append(ChainCheck(_name(prev, chain), _name(nxt, chain), nxt.lo - prev.hi))
    checks.append(ChainCheck(_name(chain[-1], chain), "1", 1 - chain[-1].hi))
    return checks


def _name(h: Hull, chain) -> str:
    i = chain.index(h)
    half = len(chain) // 2
    if h.label.startswith("B"):
        return h.label + ("-1/2" if i < half else "")
    return h.label + ("+1/2" if i >= half else "")


def petal_cores(T: DeckShuffler, depth: int = DEFAULT_DEPTH) -> tuple[list[tuple[str, Hull]], list[Hull]]:
    """The 2m-1 hull sets that petals must contain, in circular order."""
    m = T.m
    hulls = interval_hulls(T, depth)
    A, B = hulls[:m], hulls[m:]
    middle = Hull(f"A{m}uB1", A[m - 1].lo, B[0].hi, max(A[m - 1].error, B[0].error))
    cores = [(h.label, h) for h in A[: m - 1]] + [(middle.label, middle)] + [(h.label, h) for h in B[1:]]
    return cores, hulls


def flower_from_iet(T: DeckShuffler, depth: int = DEFAULT_DEPTH) -> Flower:
    """A (2m-1)-flower containing the image of H.

    Petals contain the hulls of H(A1), ..., H(A_{m-1}), H(Am ∪ B1), H(B2),
    ..., H(Bm).  Every gap between a hull and a neighbouring antipodal hull
    is cut at its midpoint, which widens point hulls and fills the rest.
    Exact IETs are checked exactly; bounded-precision ones with slack
    ``2 * 2**-depth`` per comparison.
    """
    cores, hulls = petal_cores(T, depth)
    tol = Fraction(0) if T.exact else Fraction(2, 1 << depth)

    for check in inequality_chain(T, hulls):
        if check.gap < -tol:
            raise InternalConsistencyError(
                f"hull chain out of order: {check.left} > {check.right}",
                {"left": check.left, "right": check.right, "gap": check.gap},
            )
    m = T.m
    if not hulls[m - 1].hi < HALF < hulls[m].lo:
        raise InternalConsistencyError("H(A) and H(B) are not separated by 1/2",
                                       {"A_top": hulls[m - 1].hi, "B_bottom": hulls[m].lo})
    _check_non_collapsing(cores, tol)

    arcs = [Arc(h.lo, h.hi) for _, h in cores]
    F = flower_from_cores(arcs, tolerance=tol)
    violations = validate_flower(F)
    if violations or len(F.petals) != 2 * m - 1:
        raise InternalConsistencyError("extracted flower is invalid", {"violations": violations, "flower": F})
    if T.exact:
        for arc in arcs:
            if not (F.contains(arc.left) and F.contains(arc.right)):
                raise InternalConsistencyError("hull escapes its petal", {"hull": arc, "flower": F})
    return F


def _check_non_collapsing(cores, tol: Fraction) -> None:
    arcs = [Arc(h.lo, h.hi) for _, h in cores]
    n = len(arcs)
    if n == 1:
        return
    items = sorted([(a, "core", i) for i, a in enumerate(arcs)] +
                   [(a.translate(HALF), "anti", i) for i, a in enumerate(arcs)],
                   key=lambda item: (item[0].left, item[1]))
    N = len(items)
    for pos, (arc, kind, i) in enumerate(items):
        if kind != "core" or not arc.is_point:
            continue
        before = (arc.left - items[pos - 1][0].right) % 1
        after = (items[(pos + 1) % N][0].left - arc.right) % 1
        before = before - 1 if before > HALF else before
        after = after - 1 if after > HALF else after
        if before <= tol and after <= tol:
            raise InternalConsistencyError(
                f"non-collapsing fails at {cores[i][0]}", {"core": cores[i][0], "point": arc.left}
            )


@dataclass(frozen=True)
class EndpointMatch:
    label: str
    lhs: Fraction
    rhs: Fraction

    @property
    def residual(self) -> Fraction:
        """Circular distance between ``lhs`` and ``rhs``."""
        r = (self.lhs - self.rhs) % 1
        return min(r, 1 - r)


def endpoint_matching(T: DeckShuffler, depth: int = DEFAULT_DEPTH) -> list[EndpointMatch]:
    """Residuals of the antipodal endpoint conditions that pin down a unique flower.

    ``H(a_{i,1})`` must be antipodal to ``H(b_{i,2}-)`` for ``1 <= i <= m``
    and ``H(a_{i,2}-)`` antipodal to ``H(b_{i+1,1})`` for ``i < m``.
    """
    m = T.m
    e = T.endpoints
    a_left = lambda i: e[i - 1]
    a_right = lambda i: e[i]
    b_left = lambda i: e[m + i - 1]
    b_right = lambda i: e[m + i] % 1
    out = []
    for i in range(1, m + 1):
        lhs = h_value(T, a_left(i), depth)
        rhs = h_value(T, b_right(i), depth, left=True) - HALF
        out.append(EndpointMatch(f"H(a{i},1) ~ H(b{i},2-)-1/2", lhs, rhs))
    for i in range(1, m):
        lhs = h_value(T, a_right(i), depth, left=True)
        rhs = h_value(T, b_left(i + 1), depth) + HALF
        out.append(EndpointMatch(f"H(a{i},2-) ~ H(b{i + 1},1)+1/2", lhs, rhs))
    return out


def dyadic_sqrt(n: int, bits: int) -> Fraction:
    """``floor(sqrt(n) * 2**bits) / 2**bits``."""
    return Fraction(isqrt(n << (2 * bits)), 1 << bits)


def example3_shuffler(bits: int = 256) -> DeckShuffler:
    """Lengths ``(a, b+1/4, b, 1/4)`` with ``b = (sqrt 5 - 1)/8``, ``a = 1/2 - 2b``.

    ``b`` is truncated to ``bits`` binary digits; ``a`` is then chosen so the
    relation ``a + 2b = 1/2`` holds exactly for the approximation.
    """
    b = (dyadic_sqrt(5, bits) - 1) / 8
    a = HALF - 2 * b
    q = Fraction(1, 4)
    return DeckShuffler([a, b + q, b, q], exact=False, precision=bits)
