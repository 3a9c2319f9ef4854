from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from boycottgames import (
    BoycottSpec,
    Game,
    GameError,
    Graph,
    ScenarioSpec,
    boycott,
    heterogeneous_block,
    homogeneous_block,
    is_supermodular,
    myerson_restriction,
    new_game,
    random_convex,
    random_game,
    shapley_exact,
    supermodularity_witness,
    three_block,
    triangle_example,
)
from boycottgames.generators import game_from_dividends, harsanyi_dividends, three_block_layout

import oracles
from strategies import games

F = Fraction


class TestHomogeneous:
    def test_table_n3(self):
        assert list(homogeneous_block(3).values) == [0, 0, 0, 1, 0, 1, 1, 2]

    @pytest.mark.parametrize("n", range(1, 9))
    def test_shapley(self, n):
        assert shapley_exact(homogeneous_block(n)) == (1 - F(1, n),) * n

    def test_single_player(self):
        assert homogeneous_block(1).values == (0, 0)


class TestHeterogeneous:
    def test_table_n3(self):
        g = heterogeneous_block(3, 0)
        assert g(0b011) == 3
        assert g(0b110) == 1
        assert g(0b111) == 6

    @pytest.mark.parametrize("n", range(2, 8))
    def test_shapley(self, n):
        phi = shapley_exact(heterogeneous_block(n, 1))
        assert phi[1] == n - F(1, n)
        assert all(phi[p] == 2 - F(1, n) for p in range(n) if p != 1)

    @pytest.mark.parametrize("n,a", [(4, 1), (5, 2), (6, 3), (6, 1)])
    def test_many_on_one_against_x(self, n, a):
        x = n - 1
        A = (1 << a) - 1
        psi = shapley_exact(boycott(heterogeneous_block(n, x), BoycottSpec(A, 1 << x)))
        assert all(psi[p] == 1 - F(1, n - 1) for p in range(a))
        assert psi[x] == n - a - F(1, n - a)


def three_block_by_rule(n):
    """Characteristic function evaluated coalition by coalition from the rule."""
    I, J, K = (set(range(b * n, (b + 1) * n)) for b in range(3))
    keys = {0: I, n: J, 2 * n: K}
    table = []
    for m in range(1 << 3 * n):
        S = {p for p in range(3 * n) if m >> p & 1}
        present = [blk for key, blk in keys.items() if key in S]
        if len(present) < 2:
            table.append(len(S))
        elif len(present) == 2:
            table.append(len(S) + sum(len(S & blk) for blk in present))
        else:
            table.append(3 * len(S))
    return table


class TestThreeBlock:
    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_matches_rule(self, n):
        assert list(three_block(n).values) == three_block_by_rule(n)

    @pytest.mark.parametrize("n", range(1, 6))
    def test_grand_coalition(self, n):
        g = three_block(n)
        assert g(g.grand) == 9 * n

    @pytest.mark.parametrize("n", [2, 3])
    def test_shapley(self, n):
        phi = shapley_exact(three_block(n))
        keys = {0, n, 2 * n}
        for p in range(3 * n):
            assert phi[p] == (F(4, 3) * n + F(5, 3) if p in keys else F(5, 3))

    def test_layout_keys_are_lowest_indices(self):
        lay = three_block_layout(3)
        assert lay["i"] == 1 and lay["j"] == 1 << 3 and lay["k"] == 1 << 6

    def test_rejects_empty_blocks(self):
        with pytest.raises(GameError):
            three_block(0)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_families_are_convex(n):
    assert is_supermodular(homogeneous_block(n))
    assert is_supermodular(heterogeneous_block(n, 0))
    assert is_supermodular(three_block(n))


def test_triangle_example():
    assert triangle_example().values == (0, 0, 0, 6, 0, 6, 6, 12)


class TestMyerson:
    def test_complete_triangle(self):
        base = Game(3, [6 * (bin(m).count("1") - 1) if m else 0 for m in range(8)])
        assert myerson_restriction(base, Graph.complete(3)) == triangle_example()

    def test_edgeless_is_additive(self):
        g = random_game(4, 1)
        flat = myerson_restriction(g, Graph(4))
        for m in range(16):
            assert flat(m) == sum((g(1 << p) for p in range(4) if m >> p & 1), F(0))

    def test_deleting_edge_is_boycott(self):
        base = Game(3, [6 * (bin(m).count("1") - 1) if m else 0 for m in range(8)])
        cut = myerson_restriction(base, Graph.complete(3).without_edge(0, 1))
        assert cut == boycott(triangle_example(), BoycottSpec(0b001, 0b010))

    @settings(max_examples=60)
    @given(games(max_players=5), st.data())
    def test_matches_component_oracle(self, g, data):
        pairs = [(a, b) for a in range(g.n) for b in range(a + 1, g.n)]
        edges = data.draw(st.sets(st.sampled_from(pairs)) if pairs else st.just(set()))
        out = myerson_restriction(g, Graph(g.n, frozenset(edges)))
        assert list(out.values) == oracles.myerson_by_components(g.values, g.n, edges)

    def test_graph_validation(self):
        with pytest.raises(GameError):
            Graph(3, frozenset({(1, 1)}))
        with pytest.raises(GameError):
            Graph(3, frozenset({(0, 3)}))
        with pytest.raises(GameError):
            myerson_restriction(triangle_example(), Graph(4))


class TestRandom:
    def test_random_convex_never_fails(self):
        for seed in range(1000):
            n = 3 + seed % 6
            assert supermodularity_witness(random_convex(n, seed)) is None

    def test_determinism(self):
        assert random_convex(6, 42) == random_convex(6, 42)
        assert random_game(6, 42) == random_game(6, 42)
        assert random_game(6, 42) != random_game(6, 43)

    def test_random_game_shape(self):
        g = random_game(5, 0)
        assert g(0) == 0
        assert any(v.denominator > 1 for v in g.values)

    @given(games(max_players=5))
    def test_dividends_roundtrip(self, g):
        d = harsanyi_dividends(g)
        rebuilt = [sum((d[T] for T in range(len(g)) if T & S == T), F(0)) for S in range(len(g))]
        assert tuple(rebuilt) == g.values

    def test_nonnegative_dividends_give_convex_game(self):
        d = [0, 5, -2, 1, 3, 0, 2, 7]
        assert is_supermodular(game_from_dividends(3, d))


class TestScenarioSpec:
    @pytest.mark.parametrize(
        "family,params,expected",
        [
            ("homogeneous", {"n": 4}, homogeneous_block(4)),
            ("heterogeneous", {"n": 4, "x": 2}, heterogeneous_block(4, 2)),
            ("three_block", {"n": 2}, three_block(2)),
            ("triangle", {}, triangle_example()),
            ("random_convex", {"n": 5, "seed": 3}, random_convex(5, 3)),
            ("random_any", {"n": 5, "seed": 3}, random_game(5, 3)),
        ],
    )
    def test_build(self, family, params, expected):
        assert ScenarioSpec(family, params).build() == expected

    def test_myerson_family(self):
        base = new_game(2, [0, 1, 2, 5])
        built = ScenarioSpec("myerson", {"base": base, "graph": Graph(2)}).build()
        assert built.values == (0, 1, 2, 3)

    def test_unknown_family(self):
        with pytest.raises(GameError):
            ScenarioSpec("lattice", {})
