"""Boycotts between coalitions in cooperative TU games.

Build games as dense exact-rational tables, form A,B-boycott games, compute
Shapley values and boycott impact, and check the convex-game theorems.
"""

from .boycott import BoycottSpec, boycott, boycott_by_decomposition, dominance_witness, dominates
from .exceptions import (
    EmptyRestrictionError,
    GameError,
    InstanceTooLargeError,
    InvalidCoalitionError,
    LengthMismatchError,
    NonzeroEmptyCoalitionError,
    OverlappingArgumentsError,
    SizeLimitExceededError,
)
from .game import (
    Game,
    are_disjointly_productive,
    coalition,
    disjoint_productivity_witness,
    is_invariant_player,
    is_null_player,
    is_supermodular,
    marginal,
    members,
    new_game,
    restrict,
    subgame,
    supermodularity_witness,
)
from .generators import (
    Graph,
    ScenarioSpec,
    heterogeneous_block,
    homogeneous_block,
    myerson_restriction,
    random_convex,
    random_game,
    three_block,
    triangle_example,
)
from .values import (
    ImpactVector,
    SampledValueVector,
    check_balanced_impact,
    check_boycott_respecting,
    impact,
    impact_decomposed,
    shapley_exact,
    shapley_sampled,
)

__version__ = "0.1.0"
