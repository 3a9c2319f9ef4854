"""Coalition-level boycott games and pointwise game comparison."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import OverlappingArgumentsError
from .game import (
    Game,
    _all_masks,
    check_coalition,
    coalition,
    disjoint_productivity_witness,
    members,
    common_tables,
)


@dataclass(frozen=True)
class BoycottSpec:
    """Coalition ``A`` boycotts coalition ``B``; both are bitmasks.

    Either side may be empty, in which case the boycott changes nothing.
    """

    A: int
    B: int

    def __post_init__(self):
        if self.A < 0 or self.B < 0:
            raise ValueError("coalitions must be non-negative bitmasks")
        if self.A & self.B:
            raise OverlappingArgumentsError(
                f"boycotting and boycotted coalitions overlap: {members(self.A & self.B)}"
            )

    @classmethod
    def of(cls, A, B) -> "BoycottSpec":
        """Build from two iterables of player indices."""
        return cls(coalition(*A), coalition(*B))

    def role(self, p: int) -> str:
        if self.A >> p & 1:
            return "boycotter"
        if self.B >> p & 1:
            return "boycotted"
        return "bystander"

    def check(self, n: int) -> None:
        check_coalition(self.A, n)
        check_coalition(self.B, n)


def boycott_table(num: np.ndarray, n: int, A: int, B: int) -> np.ndarray:
    """Numerators of ``v_{~A} + v_{~B} - v_{~A & ~B}`` for a numerator table.

    Works on a single table (shape ``(2**n,)``) or a stack of tables.
    """
    S = _all_masks(n)
    return num[..., S & ~A] + num[..., S & ~B] - num[..., S & ~(A | B)]


def boycott(g: Game, spec: BoycottSpec, *, check: bool = False) -> Game:
    """The A,B-boycott game of ``g``.

    Built from the subgame sum ``v_{~A} + v_{~B} - v_{~A & ~B}``. With
    ``check=True`` the result is also verified against the two defining
    properties and the coalition-level decomposition formula.
    """
    spec.check(g.n)
    result = g.with_table(boycott_table(g.numerators, g.n, spec.A, spec.B))
    if check:
        _check_postconditions(g, spec, result)
    return result


def boycott_by_decomposition(g: Game, spec: BoycottSpec) -> Game:
    """Independent construction: for ``S`` outside ``A | B`` and ``A' <= A``,
    ``B' <= B`` the value of ``S | A' | B'`` is ``v(S|A') + v(S|B') - v(S)``.
    """
    spec.check(g.n)
    S = _all_masks(g.n)
    num = g.numerators
    rest = S & ~(spec.A | spec.B)
    a_part = S & spec.A
    b_part = S & spec.B
    table = num[rest | a_part] + num[rest | b_part] - num[rest]
    return g.with_table(table)


def _check_postconditions(g: Game, spec: BoycottSpec, result: Game) -> None:
    S = _all_masks(g.n)
    untouched = ((S & spec.A) == 0) | ((S & spec.B) == 0)
    before, after = common_tables(g, result)
    if not np.array_equal(after[untouched], before[untouched]):
        raise AssertionError("boycott game differs from v on a coalition missing A or B")
    witness = disjoint_productivity_witness(result, spec.A, spec.B)
    if witness is not None:
        raise AssertionError(f"A and B are not disjointly productive in boycott game: {witness}")
    if result != boycott_by_decomposition(g, spec):
        raise AssertionError("subgame-sum and decomposition constructions disagree")


def dominance_witness(g1: Game, g2: Game) -> int | None:
    """Smallest coalition ``S`` with ``g1(S) < g2(S)``, or ``None``."""
    if g1.n != g2.n:
        raise ValueError("games have different player counts")
    a, b = common_tables(g1, g2)
    bad = np.flatnonzero(a < b)
    return int(bad[0]) if bad.size else None


def dominates(g1: Game, g2: Game) -> bool:
    """True iff ``g1(S) >= g2(S)`` for every coalition."""
    return dominance_witness(g1, g2) is None
