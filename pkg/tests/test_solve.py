from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import arenas
from oracles import buchi_enum, naive_attractor, union_enum
from pdresilience.model import ExplicitArena, simulate
from pdresilience.solve import (
    attractor, initial_safe, solve_buchi, solve_safety, solve_union_safety_or_buchi,
)


@settings(max_examples=200, deadline=None)
@given(arenas(), st.integers(0, 1), st.data())
def test_attractor_matches_naive(arena, player, data):
    target = data.draw(st.sets(st.integers(0, arena.n - 1)))
    got, attacker, defender = attractor(arena, target, player)
    assert set(got) == naive_attractor(arena, target, player)
    attacker.check(arena)
    defender.check(arena)
    # the defender's trap stays outside; the attacker's moves stay inside
    for v, u in defender.choice.items():
        assert v not in got and u not in got
    for v, u in attacker.choice.items():
        assert v in got and (u in got)


@settings(max_examples=100, deadline=None)
@given(arenas(), st.integers(0, 1), st.data())
def test_attractor_idempotent(arena, player, data):
    target = data.draw(st.sets(st.integers(0, arena.n - 1)))
    once, _, _ = attractor(arena, target, player)
    twice, _, _ = attractor(arena, once, player)
    assert once == twice


@settings(max_examples=150, deadline=None)
@given(arenas())
def test_safety_strategy_stays_safe(arena):
    sol = solve_safety(arena)
    assert sol.w0 | sol.w1 == frozenset(range(arena.n)) and not sol.w0 & sol.w1
    assert initial_safe(arena) == (arena.initial in sol.w0)
    for v in sol.w0:
        assert v not in arena.unsafe
        if arena.owner[v] == 0:
            assert sol.strategy0(v) in sol.w0
        else:
            assert set(arena.succ[v]) <= sol.w0
    for v in sol.w1:
        if arena.owner[v] == 1 and v not in arena.unsafe:
            assert sol.strategy1(v) in sol.w1
    if arena.initial in sol.w0:
        for seed in range(5):
            play = simulate(arena, sol.strategy0, None, (), 30, seed)
            assert not play.visits(arena.unsafe)


@settings(max_examples=120, deadline=None)
@given(arenas(max_n=5, disturbances=False, max_succ=2), st.data())
def test_buchi_matches_enumeration(arena, data):
    acc = data.draw(st.sets(st.integers(0, arena.n - 1)))
    w0, w1, strat = solve_buchi(arena, acc)
    assert set(w0) == buchi_enum(arena, acc)
    assert w0 | w1 == frozenset(range(arena.n))
    for v in w0:
        if arena.owner[v] == 0:
            assert strat(v) in w0


@settings(max_examples=120, deadline=None)
@given(arenas(max_n=3, disturbances=False, max_succ=2), st.data())
def test_union_matches_enumeration(arena, data):
    bad = data.draw(st.sets(st.integers(0, arena.n - 1)))
    acc = data.draw(st.sets(st.integers(0, arena.n - 1)))
    w0 = solve_union_safety_or_buchi(arena, bad, acc)[0]
    assert set(w0) == union_enum(arena, bad, acc)


def test_union_needs_both_parts():
    # 0 (P1) idles safely or jumps to 1, an unsafe but accepting self-loop
    arena = ExplicitArena([0, 1], [1, 0], [[0, 1], [1]])
    assert 0 in solve_union_safety_or_buchi(arena, {1}, {1})[0]
    assert 0 not in solve_union_safety_or_buchi(arena, {1}, set())[0]
    assert 0 not in solve_buchi(arena, {1})[0]
    assert 0 not in solve_safety(arena, {1}).w0
    # visiting the unsafe vertex once and then idling loses
    arena = ExplicitArena([0, 1, 2], [1, 0, 0], [[1, 2], [0], [2]])
    assert 0 not in solve_union_safety_or_buchi(arena, {1}, {1})[0]


def test_fig1_attractor_of_sink():
    from pdresilience.generators import gen_fig1
    from pdresilience.model import Config, expand_truncated

    arena = expand_truncated(gen_fig1(), 3)
    got, _, _ = attractor(arena, {arena.index[Config("q_2", ())]}, 1)
    assert {arena.labels[v] for v in got} == {Config("q_2", ()), Config("q_1", ())}
    assert attractor(arena, (), 1)[0] == frozenset()


@settings(max_examples=50, deadline=None)
@given(arenas(disturbances=False))
def test_degenerate_objectives(arena):
    everything = frozenset(range(arena.n))
    assert solve_safety(arena, ()).w0 == everything
    assert solve_safety(arena, everything).w1 == everything
    assert solve_buchi(arena, everything)[0] == everything
    assert solve_buchi(arena, ())[0] == frozenset()
    assert solve_union_safety_or_buchi(arena, (), ())[0] == everything
    bad = arena.unsafe
    assert solve_union_safety_or_buchi(arena, bad, ())[0] == solve_safety(arena, bad).w0
