"""Resilience of safety games with disturbances on pushdown and one-counter arenas."""

from .engine import (
    Bounds, ResilienceTable, ResilienceUnknown, brute_force_resilience, check_omega_plus_one,
    compute_bounds, d_boundary, extract_optimal_strategy, resilience_fixpoint, resilience_initial,
    strategy_resilience,
)
from .generators import (
    gen_binary_pds, gen_fig1, gen_fig3, gen_primorial_ocs, gen_random, primorial,
)
from .gameio import parse_game, serialize_game
from .model import (
    OMEGA_PLUS_ONE, Certificate, Config, ExplicitArena, Finite, Play, PositionalStrategy,
    PushdownGameSpec, ResilienceValue, Rule, expand_truncated, f_sink_normalize, simulate,
)
from .onecounter import (
    StrategyGraph, extract_strategy_graph, strategy_graph_exists, verify_strategy_graph,
)
from .reach import backward_induction_oracle, optimal_reach_value, split_edges_transform
from .rigging import counter_product, lift_strategy_down, rig_arena, rig_pds, translate_play_up
from .solve import attractor, solve_buchi, solve_safety, solve_union_safety_or_buchi

__all__ = [
    "attractor",
    "backward_induction_oracle",
    "Bounds",
    "brute_force_resilience",
    "Certificate",
    "check_omega_plus_one",
    "compute_bounds",
    "Config",
    "counter_product",
    "d_boundary",
    "expand_truncated",
    "ExplicitArena",
    "extract_optimal_strategy",
    "extract_strategy_graph",
    "f_sink_normalize",
    "Finite",
    "gen_binary_pds",
    "gen_fig1",
    "gen_fig3",
    "gen_primorial_ocs",
    "gen_random",
    "lift_strategy_down",
    "OMEGA_PLUS_ONE",
    "optimal_reach_value",
    "parse_game",
    "Play",
    "PositionalStrategy",
    "primorial",
    "PushdownGameSpec",
    "resilience_fixpoint",
    "resilience_initial",
    "ResilienceTable",
    "ResilienceUnknown",
    "ResilienceValue",
    "rig_arena",
    "rig_pds",
    "Rule",
    "serialize_game",
    "simulate",
    "solve_buchi",
    "solve_safety",
    "solve_union_safety_or_buchi",
    "split_edges_transform",
    "strategy_graph_exists",
    "strategy_resilience",
    "StrategyGraph",
    "translate_play_up",
    "verify_strategy_graph",
]

__version__ = "0.1.0"
