import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pdresilience.engine import ResilienceUnknown, brute_force_resilience, resilience_initial
from pdresilience.generators import gen_fig1, gen_primorial_ocs, gen_random, with_preamble
from pdresilience.model import (
    BOTTOM, OMEGA_PLUS_ONE, OPTIMISTIC, Config, Finite, PositionalStrategy, PushdownGameSpec, Rule,
    expand_truncated, f_sink_normalize,
)
from pdresilience.onecounter import (
    ExtractionError, StrategyGraph, extract_strategy_graph, graph_strategy, level_bound,
    rank_attacker, strategy_graph_exists, verify_strategy_graph,
)
from pdresilience.rigging import rig_pds

A = "A"


def one_step():
    # Player 1 moves straight into the unsafe sink
    return PushdownGameSpec(("p", "f"), {"p": 1, "f": 1}, "p", (A,),
                            [Rule("p", BOTTOM, "f", ()), Rule("p", A, "p", ()),
                             Rule("f", BOTTOM, "f", ()), Rule("f", A, "f", (A,))],
                            unsafe_states={"f"})


def fig1_from(n):
    return f_sink_normalize(with_preamble(gen_fig1(), "q_1", (A,) * n))


def graph_of(spec, k, T=8):
    arena = expand_truncated(rig_pds(spec), T, OPTIMISTIC)
    _, strategy = rank_attacker(arena)
    return extract_strategy_graph(spec, k, strategy, arena), arena


class TestExtract:
    def test_one_step(self):
        g, _ = graph_of(one_step(), 1)
        assert verify_strategy_graph(g, one_step(), 1) == []
        # the Player-1 move is subdivided through its edge vertex
        assert len(g.vertices) == 3
        root = Config("p", ())
        assert g.mu_r[root] == 0 and g.mu_d[root] == 2
        assert g.mu_d[Config("f", ())] == 0

    def test_fig1_from_two(self):
        spec = fig1_from(2)
        g, _ = graph_of(spec, 3)
        assert verify_strategy_graph(g, spec, 3) == []
        assert g.mu_r[Config("pre0", ())] == 2

    def test_fig1_from_two_budget_too_small(self):
        spec = fig1_from(2)
        with pytest.raises(ExtractionError, match="disturbances") as exc:
            graph_of(spec, 2)
        assert exc.value.witness

    def test_loop_detected(self):
        spec = f_sink_normalize(gen_fig1().replace(disturbance_transitions=()))
        arena = expand_truncated(rig_pds(spec), 4)
        # a Player-1 strategy that idles forever in the q_I row never reaches F
        choice = {v: arena.succ[v][0] for v in range(arena.n) if arena.owner[v] == 1}
        with pytest.raises(ExtractionError):
            extract_strategy_graph(spec, 1, PositionalStrategy(1, choice), arena)

    def test_primorial_one(self):
        spec = f_sink_normalize(gen_primorial_ocs(1))
        res = strategy_graph_exists(spec, 3)
        assert res.exists and verify_strategy_graph(res.graph, spec, 3) == []


class TestVerify:
    def test_empty_graph(self):
        problems = verify_strategy_graph(StrategyGraph(1, (), ()), one_step(), 1)
        assert any(p.prop == "1" for p in problems)

    def test_mu_d_tie(self):
        g, _ = graph_of(one_step(), 1)
        mu_d = dict(g.mu_d)
        u, w = g.edges[0]
        mu_d[u] = mu_d[w]
        bad = StrategyGraph(1, g.vertices, g.edges, g.mu_r, mu_d)
        assert any(p.prop == "5" for p in verify_strategy_graph(bad, one_step(), 1))

    def test_foreign_vertex(self):
        g, _ = graph_of(one_step(), 1)
        bad = StrategyGraph(1, (*g.vertices, Config("nowhere", ())), g.edges, g.mu_r, g.mu_d)
        assert any(p.prop == "structural" for p in verify_strategy_graph(bad, one_step(), 1))

    def test_requires_normal_form(self):
        with pytest.raises(ValueError):
            verify_strategy_graph(StrategyGraph(1, (), ()), gen_fig1().replace(
                unsafe_states={"q_1", "q_2"}), 1)

    def test_text_round_trip(self):
        g, _ = graph_of(fig1_from(2), 3)
        assert StrategyGraph.from_text(g.to_text()) == g


class TestExists:
    def test_unreachable_k1(self):
        spec = f_sink_normalize(gen_fig1())
        assert not strategy_graph_exists(spec, 1).exists

    @pytest.mark.parametrize("k,expected", [(6, False), (7, True)])
    def test_primorial_two(self, k, expected):
        spec = f_sink_normalize(gen_primorial_ocs(2))
        assert strategy_graph_exists(spec, k).exists is expected

    def test_level_bound(self):
        assert level_bound(one_step(), 2) == 4 ** 4

    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 10**6), st.integers(1, 3), st.integers(1, 4))
    def test_matches_brute_force(self, seed, n, k):
        spec = f_sink_normalize(gen_random(seed, n))
        T = 8
        res = strategy_graph_exists(spec, k, T)
        arena = expand_truncated(spec, T)
        value = brute_force_resilience(arena, k)[arena.initial]
        # Player-1 wins on the truncation are sound, so a graph implies value < k
        if res.exists:
            assert value is not None and value < Finite(k)
            assert verify_strategy_graph(res.graph, spec, k) == []
        elif value is not None and value < Finite(k):
            pytest.fail("brute force finds a Player-1 win the product missed")


def test_graph_strategy_wins_simulations():
    spec = fig1_from(2)
    g, arena = graph_of(spec, 3)
    tau = graph_strategy(g, arena)
    # disturbances are Player-1 moves in the rigged arena, so random Player-0 play suffices
    rng = random.Random(0)
    for _ in range(1000):
        v, steps = arena.initial, 0
        while v not in arena.unsafe:
            v = tau(v) if arena.owner[v] == 1 else rng.choice(arena.succ[v])
            steps += 1
            assert steps <= len(g.vertices)


def test_round_trip_agrees_with_resilience():
    for k in (1, 2, 3):
        spec = f_sink_normalize(gen_primorial_ocs(1))
        try:
            r = resilience_initial(spec)
        except ResilienceUnknown:
            continue
        assert strategy_graph_exists(spec, k).exists == (r < Finite(k))
        assert r != OMEGA_PLUS_ONE
