"""Slow, independent reference computations used to check the fast paths.

Everything here works on plain Python frozensets and Fractions and shares no
code with the package beyond reading ``Game`` values.
"""

from fractions import Fraction
from itertools import combinations, permutations
from math import factorial


def mask_of(players):
    return sum(1 << p for p in players)


def subsets(players):
    players = list(players)
    for r in range(len(players) + 1):
        for c in combinations(players, r):
            yield frozenset(c)


def value(table, S):
    return table[mask_of(S)]


def shapley_by_permutations(table, n):
    """Average marginal contribution over all n! orderings."""
    phi = [Fraction(0)] * n
    for order in permutations(range(n)):
        seen = frozenset()
        for p in order:
            phi[p] += value(table, seen | {p}) - value(table, seen)
            seen = seen | {p}
    return [x / factorial(n) for x in phi]


def supermodular_all_pairs(table, n):
    """Direct check of v(S|T) + v(S&T) >= v(S) + v(T) over all pairs."""
    subs = list(subsets(range(n)))
    return all(
        value(table, S | T) + value(table, S & T) >= value(table, S) + value(table, T)
        for S in subs
        for T in subs
    )


def boycott_from_definition(table, n, A, B):
    """Per coalition: unchanged if it misses A or B, else
    v(S0 | A') + v(S0 | B') - v(S0) with S0 the part outside A | B.
    """
    A, B = frozenset(A), frozenset(B)
    out = {}
    for S in subsets(range(n)):
        if not (S & A) or not (S & B):
            out[mask_of(S)] = value(table, S)
        else:
            rest = S - A - B
            out[mask_of(S)] = value(table, rest | (S & A)) + value(table, rest | (S & B)) - value(table, rest)
    return [out[m] for m in range(1 << n)]


def disjointly_productive_pair(table, n, i, j):
    others = [p for p in range(n) if p not in (i, j)]
    return all(
        value(table, S | {i, j}) - value(table, S | {j}) == value(table, S | {i}) - value(table, S)
        for S in subsets(others)
    )


def components(S, edges):
    S = set(S)
    comps = []
    while S:
        start = S.pop()
        comp = {start}
        stack = [start]
        while stack:
            u = stack.pop()
            for a, b in edges:
                for x, y in ((a, b), (b, a)):
                    if x == u and y in S:
                        S.discard(y)
                        comp.add(y)
                        stack.append(y)
        comps.append(frozenset(comp))
    return comps


def myerson_by_components(table, n, edges):
    return [
        sum((value(table, C) for C in components(S, edges)), Fraction(0))
        for S in (frozenset(p for p in range(n) if m >> p & 1) for m in range(1 << n))
    ]
