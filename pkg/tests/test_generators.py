import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pdresilience.engine import brute_force_resilience, resilience_fixpoint, resilience_initial
from pdresilience.generators import (
    gen_binary_pds, gen_fig1, gen_fig3, gen_primorial_ocs, gen_random, primes, primorial,
    with_preamble,
)
from pdresilience.model import Config, Finite, expand_truncated


@pytest.mark.parametrize("k,value", [(0, 1), (1, 2), (2, 6), (3, 30), (5, 2310)])
def test_primorial(k, value):
    assert primorial(k) == value


def test_primes_independent():
    found = [n for n in range(2, 60) if all(n % d for d in range(2, n))]
    assert primes(len(found)) == found


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 12))
def test_primorial_at_least_power_of_two(k):
    assert primorial(k) >= 2 ** k


def test_fig1_values():
    assert resilience_initial(gen_fig1()).kind == "omega+1"
    arena = expand_truncated(gen_fig1(), 8)
    table = resilience_fixpoint(arena)
    brute = brute_force_resilience(arena, 9)
    assert table[arena.index[Config("q_2", ())]] == Finite(0)
    for n in range(9):
        v = arena.index[Config("q_1", ("A",) * n)]
        assert table[v] == brute[v] == Finite(n)


@pytest.mark.parametrize("k,value", [(1, 2), (2, 6)])
def test_primorial_family(k, value):
    assert resilience_initial(gen_primorial_ocs(k)) == Finite(value)


def test_primorial_one_brute_force():
    # Player 1 must hand over at an even counter, else the mod-2 checker is safe
    arena = expand_truncated(gen_primorial_ocs(1), 12)
    assert brute_force_resilience(arena, 6)[arena.initial] == Finite(2)


def test_binary_one():
    assert resilience_initial(gen_binary_pds(1)) == Finite(3)
    arena = expand_truncated(gen_binary_pds(1), 6)
    assert brute_force_resilience(arena, 6)[arena.initial] == Finite(3)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_binary_initial_well_formed(k):
    spec = gen_binary_pds(k)
    assert spec.initial_config == Config("i", ())
    assert spec.successors(spec.initial_config)


def test_fig3_shape():
    spec = gen_fig3()
    assert spec.objective == "reach" and spec.unsafe_states == {"a"}
    assert spec.is_one_counter


def test_preamble_relocates():
    spec = with_preamble(gen_fig1(), "q_1", ("A",) * 3)
    arena = expand_truncated(spec, 4)
    assert Config("q_1", ("A",) * 3) in arena.index
    assert resilience_initial(spec) == Finite(3)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 5), st.booleans(), st.booleans())
def test_random_is_valid_and_deterministic(seed, n, oc, reach):
    a = gen_random(seed, n, one_counter=oc, reach=reach)
    assert a == gen_random(seed, n, one_counter=oc, reach=reach)
    assert a.initial_state not in a.unsafe_states
    assert len(a.states) == n
    if reach:
        assert not a.disturbance_transitions


def test_bad_arguments():
    with pytest.raises(ValueError):
        gen_primorial_ocs(0)
    with pytest.raises(ValueError):
        primorial(-1)
