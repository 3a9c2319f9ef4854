"""Transferable-utility games over bit-indexed coalitions.

A coalition is a plain ``int`` bitmask: bit ``t`` set means player ``t`` is a
member. A :class:`Game` stores its characteristic function as a dense table of
``2**n`` exact rationals, held internally as integer numerators over one
common denominator so that table arithmetic can be vectorised with numpy
without ever rounding.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .exceptions import (
    EmptyRestrictionError,
    InvalidCoalitionError,
    LengthMismatchError,
    NonzeroEmptyCoalitionError,
    OverlappingArgumentsError,
    SizeLimitExceededError,
)

MAX_PLAYERS = 20

# numerators below this bound are kept as int64; sums of a few table entries
# times 2**20 terms still fit in 63 bits
_INT64_LIMIT = 1 << 40


def coalition(*players: int) -> int:
    """Bitmask of the given player indices."""
    mask = 0
    for p in players:
        mask |= 1 << p
    return mask


def members(S: int) -> list[int]:
    """Player indices contained in ``S``, ascending."""
    out = []
    t = 0
    while S:
        if S & 1:
            out.append(t)
        S >>= 1
        t += 1
    return out


def popcount(S: int) -> int:
    return S.bit_count()


def full(n: int) -> int:
    return (1 << n) - 1


def check_coalition(S: int, n: int) -> int:
    if not isinstance(S, (int, np.integer)) or S < 0 or S >> n:
        raise InvalidCoalitionError(f"coalition {S!r} is not a subset of {n} players")
    return int(S)


def check_player(i: int, n: int) -> int:
    if not isinstance(i, (int, np.integer)) or not 0 <= i < n:
        raise InvalidCoalitionError(f"player {i!r} outside universe of {n} players")
    return int(i)


@lru_cache(maxsize=None)
def _all_masks(n: int) -> np.ndarray:
    masks = np.arange(1 << n, dtype=np.int64)
    masks.flags.writeable = False
    return masks


@lru_cache(maxsize=None)
def _masks_without(n: int, excluded: int) -> np.ndarray:
    masks = _all_masks(n)
    out = masks[(masks & excluded) == 0]
    out.flags.writeable = False
    return out


@lru_cache(maxsize=None)
def _popcounts(n: int) -> np.ndarray:
    counts = np.zeros(1 << n, dtype=np.int64)
    for t in range(n):
        counts[1 << t : 1 << (t + 1)] = counts[: 1 << t] + 1
    counts.flags.writeable = False
    return counts


def scale_numerators(num: np.ndarray, factor: int) -> np.ndarray:
    """``num * factor`` without int64 overflow."""
    if factor == 1:
        return num
    if num.dtype != object and int(np.abs(num).max(initial=0)) * factor < (1 << 62):
        return num * factor
    return num.astype(object) * factor


def _as_numerator_array(nums: Sequence[int] | np.ndarray) -> np.ndarray:
    arr = np.asarray(nums)
    if arr.dtype == object:
        ints = [int(x) for x in arr]
    elif np.issubdtype(arr.dtype, np.integer):
        if arr.size == 0 or int(np.abs(arr).max()) < _INT64_LIMIT:
            out = arr.astype(np.int64, copy=True)
            out.flags.writeable = False
            return out
        ints = [int(x) for x in arr]
    else:
        raise TypeError(f"numerators must be integers, got dtype {arr.dtype}")
    if max((abs(x) for x in ints), default=0) < _INT64_LIMIT:
        out = np.array(ints, dtype=np.int64)
    else:
        out = np.empty(len(ints), dtype=object)
        out[:] = ints
    out.flags.writeable = False
    return out


def common_tables(g1: "Game", g2: "Game") -> tuple[np.ndarray, np.ndarray]:
    """Numerator tables of two games brought over one common denominator."""
    return (
        scale_numerators(g1.numerators, g2.denominator),
        scale_numerators(g2.numerators, g1.denominator),
    )


class Game:
    """A TU game ``(N, v)`` with ``n`` players and exact rational values.

    ``values`` is indexed by coalition bitmask and must have length ``2**n``
    with ``values[0] == 0``. Entries may be ints, :class:`~fractions.Fraction`
    or anything ``Fraction`` accepts (including ``"5/3"`` strings).

    Games are immutable and compare equal when their tables are equal.
    """

    __slots__ = ("_n", "_num", "_den", "_names", "_values")

    def __init__(self, n: int, values: Iterable, names: Sequence[str] | None = None):
        _check_size(n)
        fracs = [v if isinstance(v, Fraction) else Fraction(v) for v in values]
        if len(fracs) != 1 << n:
            raise LengthMismatchError(
                f"table has {len(fracs)} entries, expected 2**{n} = {1 << n}"
            )
        den = 1
        for f in fracs:
            den = den * f.denominator // math.gcd(den, f.denominator)
        nums = [f.numerator * (den // f.denominator) for f in fracs]
        self._init(n, nums, den, names)

    @classmethod
    def from_numerators(
        cls,
        n: int,
        numerators: Sequence[int] | np.ndarray,
        denominator: int = 1,
        names: Sequence[str] | None = None,
    ) -> "Game":
        """Build a game whose value of ``S`` is ``numerators[S] / denominator``."""
        _check_size(n)
        if len(numerators) != 1 << n:
            raise LengthMismatchError(
                f"table has {len(numerators)} entries, expected 2**{n} = {1 << n}"
            )
        if denominator <= 0:
            raise ValueError("denominator must be positive")
        game = cls.__new__(cls)
        game._init(n, numerators, int(denominator), names)
        return game

    def _init(self, n, nums, den, names):
        num = _as_numerator_array(nums)
        if num[0] != 0:
            raise NonzeroEmptyCoalitionError(
                f"v(empty) must be 0, got {Fraction(int(num[0]), den)}"
            )
        g = math.gcd(den, *(int(x) for x in np.unique(num))) if den != 1 else 1
        if g > 1:
            num = _as_numerator_array(num // g)
            den //= g
        if names is not None:
            names = tuple(str(x) for x in names)
            if len(names) != n:
                raise LengthMismatchError(f"{len(names)} player names for {n} players")
        self._n = n
        self._num = num
        self._den = den
        self._names = names
        self._values = None

    @property
    def n(self) -> int:
        return self._n

    @property
    def grand(self) -> int:
        """Bitmask of the grand coalition ``N``."""
        return (1 << self._n) - 1

    @property
    def names(self) -> tuple[str, ...] | None:
        return self._names

    def player_name(self, i: int) -> str:
        return self._names[i] if self._names else str(i)

    @property
    def numerators(self) -> np.ndarray:
        """Read-only integer table; ``v(S) = numerators[S] / denominator``."""
        return self._num

    @property
    def denominator(self) -> int:
        return self._den

    @property
    def values(self) -> tuple[Fraction, ...]:
        if self._values is None:
            d = self._den
            self._values = tuple(Fraction(int(x), d) for x in self._num)
        return self._values

    def __call__(self, S: int) -> Fraction:
        S = check_coalition(S, self._n)
        return Fraction(int(self._num[S]), self._den)

    def __len__(self) -> int:
        return 1 << self._n

    def __eq__(self, other) -> bool:
        if not isinstance(other, Game):
            return NotImplemented
        return (
            self._n == other._n
            and self._den == other._den
            and bool(np.array_equal(self._num, other._num))
        )

    def __hash__(self) -> int:
        return hash((self._n, self._den, tuple(int(x) for x in self._num)))

    def __repr__(self) -> str:
        shown = ", ".join(str(v) for v in self.values[:8])
        more = ", ..." if self._n > 3 else ""
        return f"Game(n={self._n}, values=[{shown}{more}])"

    def _combine(self, other: "Game", sign: int) -> "Game":
        if not isinstance(other, Game):
            return NotImplemented
        if other._n != self._n:
            raise LengthMismatchError("games have different player counts")
        den = self._den * other._den // math.gcd(self._den, other._den)
        a = scale_numerators(self._num, den // self._den)
        b = scale_numerators(other._num, den // other._den)
        return Game.from_numerators(self._n, a + sign * b, den, self._names)

    def __add__(self, other: "Game") -> "Game":
        return self._combine(other, 1)

    def __sub__(self, other: "Game") -> "Game":
        return self._combine(other, -1)

    def with_table(self, numerators: np.ndarray, n: int | None = None) -> "Game":
        """Same denominator and names, new numerator table."""
        n = self._n if n is None else n
        names = self._names if n == self._n else None
        return Game.from_numerators(n, numerators, self._den, names)


def _check_size(n: int) -> None:
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise SizeLimitExceededError(f"player count must be >= 1, got {n!r}")
    if n > MAX_PLAYERS:
        raise SizeLimitExceededError(f"{n} players exceeds the dense-table limit {MAX_PLAYERS}")


def new_game(n: int, table: Iterable, names: Sequence[str] | None = None) -> Game:
    """Validate and build a game; see :class:`Game`."""
    return Game(n, table, names)


def marginal(g: Game, C: int, S: int) -> Fraction:
    """``dv_C(S) = v(S | C) - v(S)`` for disjoint ``C`` and ``S``."""
    C = check_coalition(C, g.n)
    S = check_coalition(S, g.n)
    if C & S:
        raise OverlappingArgumentsError("marginal requires C and S to be disjoint")
    return Fraction(int(g.numerators[S | C] - g.numerators[S]), g.denominator)


def subgame(g: Game, C: int) -> Game:
    """The game ``S -> v(S & C)``; players outside ``C`` become null."""
    C = check_coalition(C, g.n)
    return g.with_table(g.numerators[_all_masks(g.n) & C])


def restrict(g: Game, C: int) -> Game:
    """The game on the players of ``C`` only, reindexed in ascending order."""
    C = check_coalition(C, g.n)
    if C == 0:
        raise EmptyRestrictionError("cannot restrict a game to the empty coalition")
    kept = members(C)
    k = len(kept)
    local = _all_masks(k)
    original = np.zeros(1 << k, dtype=np.int64)
    for t, p in enumerate(kept):
        original |= ((local >> t) & 1) << p
    names = tuple(g.names[p] for p in kept) if g.names else tuple(str(p) for p in kept)
    return Game.from_numerators(k, g.numerators[original], g.denominator, names)


class PairWitness(NamedTuple):
    """Players ``i``, ``j`` and coalition ``S`` at which a pairwise condition fails."""

    i: int
    j: int
    S: int


def _second_difference(num: np.ndarray, n: int, i: int, j: int):
    bi, bj = 1 << i, 1 << j
    base = _masks_without(n, bi | bj)
    d = num[base | bi | bj] - num[base | bj] - num[base | bi] + num[base]
    return base, d


def supermodularity_witness(g: Game) -> PairWitness | None:
    """First ``(i, j, S)`` with ``dv_i(S + j) < dv_i(S)``, or ``None`` if convex.

    Pairs are scanned with ``i < j`` in lexicographic order and ``S`` in
    bitmask order, so the witness is the lexicographically smallest one.
    """
    num, n = g.numerators, g.n
    for i in range(n):
        for j in range(i + 1, n):
            base, d = _second_difference(num, n, i, j)
            bad = np.flatnonzero(d < 0)
            if bad.size:
                return PairWitness(i, j, int(base[bad[0]]))
    return None


def is_supermodular(g: Game) -> bool:
    return supermodularity_witness(g) is None


def disjoint_productivity_witness(g: Game, A: int, B: int) -> PairWitness | None:
    """First ``(i, j, S)``, ``i`` in A and ``j`` in B, where i and j interact."""
    A = check_coalition(A, g.n)
    B = check_coalition(B, g.n)
    if A & B:
        raise OverlappingArgumentsError("A and B must be disjoint")
    num, n = g.numerators, g.n
    for i in members(A):
        for j in members(B):
            base, d = _second_difference(num, n, min(i, j), max(i, j))
            bad = np.flatnonzero(d != 0)
            if bad.size:
                return PairWitness(i, j, int(base[bad[0]]))
    return None


def are_disjointly_productive(g: Game, A: int, B: int) -> bool:
    return disjoint_productivity_witness(g, A, B) is None


def is_null_player(g: Game, i: int) -> bool:
    i = check_player(i, g.n)
    base = _masks_without(g.n, 1 << i)
    num = g.numerators
    return bool(np.all(num[base | (1 << i)] == num[base]))


def is_invariant_player(original: Game, transformed: Game, k: int) -> bool:
    """True iff both games agree on every coalition containing ``k``."""
    if original.n != transformed.n:
        raise LengthMismatchError("games have different player counts")
    k = check_player(k, original.n)
    with_k = _masks_without(original.n, 1 << k) | (1 << k)
    a, b = common_tables(original, transformed)
    return bool(np.array_equal(a[with_k], b[with_k]))
