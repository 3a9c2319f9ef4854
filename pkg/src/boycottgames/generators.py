"""Named game families, graph-restricted games and random test games."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

import numpy as np

from .exceptions import GameError
from .game import Game, _all_masks, _popcounts, check_player, is_supermodular


def homogeneous_block(n: int) -> Game:
    """``v(S) = |S| - 1`` on non-empty coalitions."""
    sizes = _popcounts(n)
    return Game.from_numerators(n, np.where(sizes > 0, sizes - 1, 0))


def heterogeneous_block(n: int, x: int = 0) -> Game:
    """Like :func:`homogeneous_block`, but coalitions containing the special
    player ``x`` are worth three times as much.
    """
    check_player(x, n)
    sizes = _popcounts(n)
    base = np.where(sizes > 0, sizes - 1, 0)
    has_x = (_all_masks(n) >> x) & 1
    return Game.from_numerators(n, np.where(has_x == 1, 3 * base, base))


def three_block_layout(n: int) -> dict[str, int]:
    """Block and key-player masks of :func:`three_block`.

    Blocks are consecutive runs of ``n`` players; the key player of each
    block is its lowest index.
    """
    I = ((1 << n) - 1)
    J = I << n
    K = I << (2 * n)
    return {"I": I, "J": J, "K": K, "i": 1, "j": 1 << n, "k": 1 << (2 * n)}


def three_block(n: int) -> Game:
    """Three trade blocks of ``n`` players joined by one key player each.

    Without two key players ``v(S) = |S|``. With the keys of blocks X and Y
    (but not the third) ``v(S) = |S| + |S & X| + |S & Y|``. With all three
    keys ``v(S) = 3|S|``.
    """
    if n < 1:
        raise GameError("three_block needs blocks of at least one player")
    lay = three_block_layout(n)
    S = _all_masks(3 * n)
    pc = _popcounts(3 * n)
    size = pc
    in_i = (S & lay["i"]) != 0
    in_j = (S & lay["j"]) != 0
    in_k = (S & lay["k"]) != 0
    s_i, s_j, s_k = pc[S & lay["I"]], pc[S & lay["J"]], pc[S & lay["K"]]
    table = size.copy()
    table = np.where(in_i & in_j & ~in_k, size + s_i + s_j, table)
    table = np.where(in_i & in_k & ~in_j, size + s_i + s_k, table)
    table = np.where(in_j & in_k & ~in_i, size + s_j + s_k, table)
    table = np.where(in_i & in_j & in_k, 3 * size, table)
    names = [f"{b}{t}" for b in "IJK" for t in range(n)]
    return Game.from_numerators(3 * n, table, names=names)


def triangle_example() -> Game:
    """Three players, pairs worth 6 and the grand coalition 12."""
    return Game(3, [0, 0, 0, 6, 0, 6, 6, 12], names=["1", "2", "3"])


@dataclass(frozen=True)
class Graph:
    """Undirected communication graph on players ``0..n-1``."""

    n: int
    edges: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        norm = set()
        for e in self.edges:
            a, b = (int(x) for x in e)
            if a == b:
                raise GameError(f"self-loop on vertex {a}")
            check_player(a, self.n)
            check_player(b, self.n)
            norm.add((min(a, b), max(a, b)))
        object.__setattr__(self, "edges", frozenset(norm))

    @classmethod
    def complete(cls, n: int) -> "Graph":
        return cls(n, frozenset((a, b) for a in range(n) for b in range(a + 1, n)))

    def without_edge(self, a: int, b: int) -> "Graph":
        return Graph(self.n, self.edges - {(min(a, b), max(a, b))})

    def neighbour_masks(self) -> list[int]:
        adj = [0] * self.n
        for a, b in self.edges:
            adj[a] |= 1 << b
            adj[b] |= 1 << a
        return adj


def myerson_restriction(base: Game, graph: Graph) -> Game:
    """Graph-restricted game: the worth of ``S`` is the sum of base worths of
    the connected components of ``S`` in ``graph``.
    """
    if graph.n != base.n:
        raise GameError(f"graph has {graph.n} vertices, game has {base.n} players")
    adj = graph.neighbour_masks()
    num = base.numerators
    out = [0] * len(base)
    for S in range(1, len(base)):
        comp = S & -S
        frontier = comp
        while frontier:
            low = frontier & -frontier
            frontier ^= low
            new = adj[low.bit_length() - 1] & S & ~comp
            comp |= new
            frontier |= new
        # rest is smaller than S, so already filled in
        out[S] = int(num[comp]) + out[S & ~comp]
    return base.with_table(np.array(out, dtype=object))


def _zeta(values: np.ndarray, n: int, sign: int = 1) -> np.ndarray:
    v = np.array(values, copy=True)
    for t in range(n):
        view = v.reshape(-1, 2, 1 << t)
        view[:, 1, :] += sign * view[:, 0, :]
    return v


def game_from_dividends(n: int, dividends) -> Game:
    """Game with ``v(S) = sum of dividends[T] over T <= S`` (integer dividends)."""
    d = np.asarray(dividends, dtype=np.int64)
    return Game.from_numerators(n, _zeta(d, n))


def harsanyi_dividends(g: Game) -> tuple[Fraction, ...]:
    """Möbius inverse of the characteristic function."""
    d = _zeta(g.numerators, g.n, sign=-1)
    return tuple(Fraction(int(x), g.denominator) for x in d)


def random_convex(n: int, seed: int, high: int = 4) -> Game:
    """Random convex game from non-negative dividends on coalitions of size >= 2."""
    rng = np.random.default_rng([0xC0, seed])
    sizes = _popcounts(n)
    d = rng.integers(0, high, size=1 << n)
    singles = rng.integers(-high, high + 1, size=1 << n)
    d = np.where(sizes == 1, singles, d)
    d[0] = 0
    g = game_from_dividends(n, d)
    assert is_supermodular(g), f"random_convex({n}, {seed}) is not supermodular"
    return g


def random_game(n: int, seed: int, bound: int = 12) -> Game:
    """Arbitrary rational table with ``v(empty) = 0``; no structure assumed."""
    rng = np.random.default_rng([0x6A, seed])
    nums = rng.integers(-bound, bound + 1, size=1 << n)
    dens = rng.integers(1, 4, size=1 << n)
    values = [Fraction(int(a), int(b)) for a, b in zip(nums, dens)]
    values[0] = Fraction(0)
    return Game(n, values)


FAMILIES = ("homogeneous", "heterogeneous", "three_block", "triangle", "myerson",
            "random_convex", "random_any")


@dataclass(frozen=True)
class ScenarioSpec:
    """Serializable description of a generated game.

    ``params`` holds family parameters: ``n``, ``x``, ``seed``, and for
    ``myerson`` a ``base`` game and ``graph``.
    """

    family: str
    params: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise GameError(f"unknown game family {self.family!r}; choose from {FAMILIES}")

    def build(self) -> Game:
        p = self.params
        if self.family == "homogeneous":
            return homogeneous_block(int(p["n"]))
        if self.family == "heterogeneous":
            return heterogeneous_block(int(p["n"]), int(p.get("x", 0)))
        if self.family == "three_block":
            return three_block(int(p["n"]))
        if self.family == "triangle":
            return triangle_example()
        if self.family == "myerson":
            return myerson_restriction(p["base"], p["graph"])
        if self.family == "random_convex":
            return random_convex(int(p["n"]), int(p.get("seed", 0)))
        return random_game(int(p["n"]), int(p.get("seed", 0)))

