"""Shapley values, boycott impact and the axioms that single the value out."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .boycott import BoycottSpec, boycott, boycott_table
from .exceptions import OverlappingArgumentsError
from .game import (
    Game,
    _masks_without,
    _popcounts,
    check_player,
    members,
    restrict,
    subgame,
)

ValueVector = tuple  # tuple[Fraction, ...], one entry per player

SAMPLE_CHUNK = 512


@lru_cache(maxsize=None)
def _size_groups(n: int, i: int) -> tuple[np.ndarray, np.ndarray]:
    # coalitions without i, sorted by size, with the start offset of each size
    base = _masks_without(n, 1 << i)
    sizes = _popcounts(n)[base]
    order = np.argsort(sizes, kind="stable")
    starts = np.searchsorted(sizes[order], np.arange(n))
    return base[order], starts


@lru_cache(maxsize=None)
def _size_weights(n: int) -> np.ndarray:
    w = np.empty(n, dtype=object)
    w[:] = [math.factorial(s) * math.factorial(n - 1 - s) for s in range(n)]
    return w


def shapley_numerators(num: np.ndarray, n: int) -> np.ndarray:
    """Shapley values scaled by ``n!`` for one or a stack of numerator tables.

    Returns an object array of Python ints with shape ``num.shape[:-1] + (n,)``;
    divide by ``n! * denominator`` to get the values.
    """
    weights = _size_weights(n)
    out = np.empty(num.shape[:-1] + (n,), dtype=object)
    for i in range(n):
        base, starts = _size_groups(n, i)
        d = num[..., base | (1 << i)] - num[..., base]
        per_size = np.add.reduceat(d, starts, axis=-1)
        out[..., i] = (per_size.astype(object) * weights).sum(axis=-1)
    return out


def shapley_exact(g: Game) -> ValueVector:
    """Exact Shapley value as a tuple of Fractions.

    Uses the size-weighted marginal sum; every coalition contributes with
    weight ``|S|! (n-|S|-1)! / n!``.
    """
    scale = math.factorial(g.n) * g.denominator
    return tuple(Fraction(int(x), scale) for x in shapley_numerators(g.numerators, g.n))


@dataclass(frozen=True)
class SampledValueVector:
    values: np.ndarray
    stderr: np.ndarray
    m: int
    seed: int


def _chunk_stats(table: np.ndarray, den: int, n: int, key: np.ndarray, chunk: int, size: int):
    # the chunk index goes in the top counter word: Philox advances the low
    # word, so neighbouring low-word counters would give overlapping streams
    bitgen = np.random.Philox(key=key, counter=np.array([0, 0, 0, chunk], dtype=np.uint64))
    rng = np.random.Generator(bitgen)
    perms = np.argsort(rng.random((size, n)), axis=1)
    prefix = np.cumsum(np.left_shift(1, perms), axis=1)
    vals = table[prefix]
    # exact integer marginals, one rounding at the division
    marg_by_pos = np.diff(vals, axis=1, prepend=0) / den
    marg = np.empty_like(marg_by_pos)
    np.put_along_axis(marg, perms, marg_by_pos, axis=1)
    # shift by the first row so that constant marginals give exact means
    shift = marg[0]
    dev = marg - shift
    mean = shift + dev.mean(axis=0)
    resid = marg - mean
    return size, mean, (resid * resid).sum(axis=0)


def shapley_sampled(g: Game, m: int, seed: int = 0, n_jobs: int = 1) -> SampledValueVector:
    """Monte-Carlo Shapley estimate from ``m`` uniformly random orderings.

    Orderings are drawn in fixed chunks of ``SAMPLE_CHUNK``; chunk ``c`` uses a
    Philox stream keyed by ``seed`` whose top counter word is ``c``, and chunk statistics
    are merged in chunk order, so the result does not depend on ``n_jobs``.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    n = g.n
    if g.numerators.dtype == object:
        table, den = np.array([float(v) for v in g.values]), 1
    else:
        table, den = g.numerators, g.denominator
    key = np.random.SeedSequence(seed).generate_state(2, np.uint64)
    chunks = [(c, min(SAMPLE_CHUNK, m - c * SAMPLE_CHUNK)) for c in range(-(-m // SAMPLE_CHUNK))]

    def run(item):
        c, size = item
        return _chunk_stats(table, den, n, key, c, size)

    if n_jobs > 1:
        with ThreadPoolExecutor(n_jobs) as pool:
            stats = list(pool.map(run, chunks))
    else:
        stats = [run(item) for item in chunks]

    count, mean, m2 = stats[0]
    for size, cmean, cm2 in stats[1:]:
        total = count + size
        delta = cmean - mean
        mean = mean + delta * (size / total)
        m2 = m2 + cm2 + delta * delta * (count * size / total)
        count = total
    if m > 1:
        stderr = np.sqrt(m2 / (m - 1)) / math.sqrt(m)
    else:
        stderr = np.zeros(n)
    return SampledValueVector(values=mean, stderr=stderr, m=m, seed=seed)


@dataclass(frozen=True)
class ImpactVector:
    """Per-player loss ``phi(v) - phi(v^AB)`` with each player's role."""

    impacts: tuple
    roles: tuple

    def __iter__(self):
        return iter(self.impacts)

    def __len__(self):
        return len(self.impacts)

    def __getitem__(self, i):
        return self.impacts[i]

    @property
    def total(self) -> Fraction:
        return sum(self.impacts, Fraction(0))


def _roles(n: int, spec: BoycottSpec) -> tuple:
    return tuple(spec.role(p) for p in range(n))


def impact(g: Game, spec: BoycottSpec) -> ImpactVector:
    before = shapley_exact(g)
    after = shapley_exact(boycott(g, spec))
    return ImpactVector(tuple(b - a for b, a in zip(before, after)), _roles(g.n, spec))


def impact_decomposed(g: Game, spec: BoycottSpec) -> ImpactVector:
    """Impact from four subgame values, using additivity of the Shapley value."""
    spec.check(g.n)
    not_a = g.grand & ~spec.A
    not_b = g.grand & ~spec.B
    phi = shapley_exact(g)
    phi_a = shapley_exact(subgame(g, not_a))
    phi_b = shapley_exact(subgame(g, not_b))
    phi_ab = shapley_exact(subgame(g, not_a & not_b))
    impacts = tuple(p - x - y + z for p, x, y, z in zip(phi, phi_a, phi_b, phi_ab))
    return ImpactVector(impacts, _roles(g.n, spec))


def impact_numerators(num: np.ndarray, n: int, spec: BoycottSpec) -> np.ndarray:
    """Impact scaled by ``n!`` times the table denominator (fast path)."""
    return shapley_numerators(num, n) - shapley_numerators(boycott_table(num, n, spec.A, spec.B), n)


class RespectWitness(NamedTuple):
    player: int
    boycott_value: Fraction
    removed_value: Fraction


def boycott_respecting_witness(g: Game, spec: BoycottSpec) -> RespectWitness | None:
    """Check that each participant's value in the boycott game equals its value
    in the game with the opposing coalition removed.
    """
    spec.check(g.n)
    after = shapley_exact(boycott(g, spec))
    for own, other in ((spec.A, spec.B), (spec.B, spec.A)):
        if not own:
            continue
        kept = g.grand & ~other
        removed = shapley_exact(restrict(g, kept))
        local = {p: t for t, p in enumerate(members(kept))}
        for p in members(own):
            if after[p] != removed[local[p]]:
                return RespectWitness(p, after[p], removed[local[p]])
    return None


def check_boycott_respecting(g: Game, spec: BoycottSpec) -> bool:
    return boycott_respecting_witness(g, spec) is None


def balanced_impact_witness(g: Game, i: int, j: int) -> tuple[Fraction, Fraction] | None:
    """``None`` if ``i`` and ``j`` lose the same in their one-on-one boycott,
    else the two differing impacts.
    """
    i = check_player(i, g.n)
    j = check_player(j, g.n)
    if i == j:
        raise OverlappingArgumentsError("a player cannot boycott itself")
    imp = impact(g, BoycottSpec(1 << i, 1 << j))
    if imp[i] != imp[j]:
        return imp[i], imp[j]
    return None


def check_balanced_impact(g: Game, i: int, j: int) -> bool:
    return balanced_impact_witness(g, i, j) is None
