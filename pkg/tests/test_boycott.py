from fractions import Fraction

import pytest
from hypothesis import given, settings

from boycottgames import (
    BoycottSpec,
    OverlappingArgumentsError,
    boycott,
    dominance_witness,
    dominates,
    is_supermodular,
    new_game,
    random_convex,
    three_block,
)
from boycottgames.boycott import boycott_by_decomposition
from boycottgames.generators import three_block_layout
from boycottgames.harness import all_specs

import oracles
from strategies import games, games_with_spec


def test_triangle_one_on_one(triangle):
    b = boycott(triangle, BoycottSpec(0b001, 0b010), check=True)
    assert b(0b011) == 0
    changed = [S for S in range(8) if b(S) != triangle(S)]
    assert changed == [0b011]
    assert b(0b111) == 12


@given(games(max_players=4))
def test_empty_boycotter_is_identity(g):
    for B in range(1 << g.n):
        assert boycott(g, BoycottSpec(0, B)) == g


def test_three_block_block_boycott():
    g = three_block(2)
    lay = three_block_layout(2)
    b = boycott(g, BoycottSpec(lay["I"], lay["J"]), check=True)
    assert b(b.grand) == 14
    # only coalitions meeting both blocks change: v(J|K) + v(I|K) - v(K)
    I, J, K = lay["I"], lay["J"], lay["K"]
    assert b(b.grand) == g(J | K) + g(I | K) - g(K)


def test_overlapping_spec_rejected():
    with pytest.raises(OverlappingArgumentsError):
        BoycottSpec(0b011, 0b010)


@settings(max_examples=150)
@given(games_with_spec(max_players=5))
def test_matches_definition_oracle(case):
    g, A, B = case
    b = boycott(g, BoycottSpec(A, B), check=True)
    assert list(b.values) == oracles.boycott_from_definition(g.values, g.n, [p for p in range(g.n) if A >> p & 1],
                                                             [p for p in range(g.n) if B >> p & 1])


@pytest.mark.parametrize("n", range(1, 7))
def test_construction_identity_exhaustive(n):
    g = random_convex(n, 11) if n > 1 else new_game(1, [0, 3])
    for A, B in zip(*all_specs(n)):
        spec = BoycottSpec(int(A), int(B))
        assert boycott(g, spec) == boycott_by_decomposition(g, spec)


@given(games_with_spec(max_players=5))
def test_symmetric_in_sides(case):
    g, A, B = case
    assert boycott(g, BoycottSpec(A, B)) == boycott(g, BoycottSpec(B, A))


@given(games_with_spec(max_players=5))
def test_idempotent(case):
    g, A, B = case
    spec = BoycottSpec(A, B)
    once = boycott(g, spec)
    assert boycott(once, spec) == once


class TestDominates:
    def test_triangle(self, triangle):
        assert dominates(triangle, boycott(triangle, BoycottSpec(0b001, 0b010)))

    @given(games(max_players=4))
    def test_reflexive(self, g):
        assert dominates(g, g)

    def test_non_convex_pair(self):
        g = new_game(2, [0, 1, 1, 1])
        b = boycott(g, BoycottSpec(0b01, 0b10))
        # 1 + 1 - 0 on the grand coalition
        assert b(0b11) == 2
        assert dominance_witness(g, b) == 0b11

    def test_mixed_denominators(self):
        a = new_game(1, [0, Fraction(1, 3)])
        b = new_game(1, [0, Fraction(1, 2)])
        assert dominates(b, a)
        assert dominance_witness(a, b) == 1


@pytest.mark.parametrize("n", [3, 4, 5])
def test_convex_games_dominate_their_boycotts(n):
    for seed in range(5):
        g = random_convex(n, seed)
        assert is_supermodular(g)
        for A, B in zip(*all_specs(n)):
            assert dominates(g, boycott(g, BoycottSpec(int(A), int(B))))
