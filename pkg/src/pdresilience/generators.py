"""Fixture games with known resilience values."""

from __future__ import annotations

import random
from math import prod

from .model import BOTTOM, PushdownGameSpec, Rule

A = "A"


def primes(k: int) -> list[int]:
    from sympy import prime
    return [int(prime(j)) for j in range(1, k + 1)]


def primorial(k: int) -> int:
    """Product of the first ``k`` primes."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    return prod(primes(k))


def gen_fig1() -> PushdownGameSpec:
    """Three Player-0 states over one symbol.

    q_I pushes forever or drops to q_1 with the same counter; q_1 idles while
    disturbances pop the counter; at zero q_1 falls into the unsafe sink q_2.
    Resilience: omega+1 on the q_I row, n at (q_1, n), 0 at (q_2, 0).
    """
    rules = [
        Rule("q_I", BOTTOM, "q_I", (A,)), Rule("q_I", A, "q_I", (A, A)),
        Rule("q_I", BOTTOM, "q_1", ()), Rule("q_I", A, "q_1", (A,)),
        Rule("q_1", A, "q_1", (A,)), Rule("q_1", BOTTOM, "q_2", ()),
        Rule("q_2", BOTTOM, "q_2", ()), Rule("q_2", A, "q_2", (A,)),
    ]
    return PushdownGameSpec(
        states=("q_I", "q_1", "q_2"), owner={"q_I": 0, "q_1": 0, "q_2": 0},
        initial_state="q_I", stack_alphabet=(A,), transitions=rules,
        disturbance_transitions=[Rule("q_1", A, "q_1", ())], unsafe_states={"q_2"})


def with_preamble(spec: PushdownGameSpec, target: str, pushes: tuple[str, ...]) -> PushdownGameSpec:
    """Start from ``(target, pushes)`` by prefixing a chain of forced push states."""
    names = [f"pre{j}" for j in range(len(pushes) + 1)]
    tops = (*spec.stack_alphabet, BOTTOM)
    rules = list(spec.transitions)
    for j, x in enumerate(reversed(pushes)):  # bottom-most symbol first
        rules += [Rule(names[j], y, names[j + 1], (x,) if y == BOTTOM else (x, y)) for y in tops]
    rules += [Rule(names[-1], y, target, () if y == BOTTOM else (y,)) for y in tops]
    owner = dict(spec.owner)
    owner.update({s: 1 for s in names})
    return spec.replace(states=(*names, *spec.states), owner=owner, initial_state=names[0],
                        transitions=rules)


def _checkers(ps, tops, pop_all):
    """Player-1 mod-p gadgets: pop the stack counting mod p; lose iff the count is 0."""
    states, rules = [], []
    for p in ps:
        for j in range(p):
            s = f"m{p}_{j}"
            states.append(s)
            rules += [Rule(s, x, f"m{p}_{(j + 1) % p}", ()) for x in pop_all]
            rules.append(Rule(s, BOTTOM, "s" if j == 0 else s, ()))
    return states, rules


def gen_primorial_ocs(k: int) -> PushdownGameSpec:
    """One-counter game whose initial resilience is ``primorial(k)``.

    Player 1 pumps the counter in ``i`` and hands over to ``c``; Player 0 either
    picks a mod-p checker (safe iff p does not divide the counter) or the drain
    ``d``, where each disturbance decrements and zero leads to the unsafe ``s``.
    """
    if k < 1:
        raise ValueError("k must be positive")
    ps = primes(k)
    chk_states, chk_rules = _checkers(ps, (A,), (A,))
    rules = [
        Rule("i", BOTTOM, "i", (A,)), Rule("i", A, "i", (A, A)), Rule("i", A, "c", (A,)),
        Rule("c", A, "d", (A,)), Rule("c", BOTTOM, "s", ()),
        Rule("d", A, "d", (A,)), Rule("d", BOTTOM, "s", ()),
        Rule("s", A, "s", (A,)), Rule("s", BOTTOM, "s", ()),
    ]
    rules += [Rule("c", A, f"m{p}_0", (A,)) for p in ps]
    rules += chk_rules
    states = ("i", "c", "d", "s", *chk_states)
    owner = {s: 1 for s in states}
    owner.update(c=0, d=0)
    return PushdownGameSpec(states, owner, "i", (A,), rules,
                            [Rule("d", A, "d", ())], {"s"})


def gen_binary_pds(k: int) -> PushdownGameSpec:
    """Pushdown game whose initial resilience is ``2**primorial(k) - 1``.

    Same shape as :func:`gen_primorial_ocs`, but the stack is a binary number
    (top = least significant bit): the drain pops zeros, idles on a one, and a
    disturbance turns that one into a zero and returns control to Player 1, who
    refills with ones. Each disturbance is one decrement.
    """
    if k < 1:
        raise ValueError("k must be positive")
    ps = primes(k)
    bits = ("0", "1")
    chk_states, chk_rules = _checkers(ps, bits, bits)
    rules = [Rule("i", BOTTOM, "i", ("1",)), Rule("c", BOTTOM, "s", ()),
             Rule("d", "0", "d", ()), Rule("d", "1", "d", ("1",)), Rule("d", BOTTOM, "s", ())]
    for x in bits:
        rules += [Rule("i", x, "i", ("1", x)), Rule("i", x, "c", (x,)), Rule("c", x, "d", (x,)),
                  Rule("s", x, "s", (x,))]
        rules += [Rule("c", x, f"m{p}_0", (x,)) for p in ps]
    rules += [Rule("s", BOTTOM, "s", ())] + chk_rules
    states = ("i", "c", "d", "s", *chk_states)
    owner = {s: 1 for s in states}
    owner.update(c=0, d=0)
    return PushdownGameSpec(states, owner, "i", bits, rules, [Rule("d", "1", "i", ("0",))], {"s"})


def gen_fig3() -> PushdownGameSpec:
    """One-counter reachability game realizing every value of omega+2.

    Rows: ``o`` (omega, no uniform witness) climbs or drops to ``l``; ``l`` at n
    reaches the target row ``a`` unless disturbances walk it down to the trap
    ``(l, 0)``; ``b`` (omega, uniform witness) reaches ``(a, 0)`` unless disturbed
    forever. ``b`` is not reachable from the initial ``o``; query it by replacing
    the initial state.
    """
    rules = [
        Rule("o", BOTTOM, "o", (A,)), Rule("o", A, "o", (A, A)),
        Rule("o", BOTTOM, "l", ()), Rule("o", A, "l", (A,)),
        Rule("l", A, "a", (A,)), Rule("l", BOTTOM, "l", ()),
        Rule("a", A, "a", ()), Rule("a", BOTTOM, "a", ()),
        Rule("b", BOTTOM, "a", ()), Rule("b", A, "b", (A,)),
    ]
    drules = [Rule("l", A, "l", ()), Rule("b", BOTTOM, "b", ())]
    return PushdownGameSpec(("o", "l", "a", "b"), dict.fromkeys("olab", 0), "o", (A,), rules,
                            drules, {"a"}, objective="reach")


def gen_random(seed: int, states: int = 3, one_counter: bool = True, symbols: int = 2,
               branching: float = 0.5, disturbance_rate: float = 0.3, unsafe_rate: float = 0.25,
               reach: bool = False) -> PushdownGameSpec:
    """Random deadlock-free spec, deterministic in ``seed``.

    ``branching`` is the chance of each extra rule per (state, top) pair (up to 3 in
    total); ``disturbance_rate`` the chance a Player-0 pair gets a disturbance rule.
    With ``reach`` the F set is a target set and no disturbances are generated.
    """
    rng = random.Random(seed)
    gamma = (A,) if one_counter else tuple("ABCDEFGH"[:max(1, symbols)])
    qs = tuple(f"q{j}" for j in range(states))
    owner = {q: rng.randrange(2) for q in qs}
    n_bad = sum(rng.random() < unsafe_rate for _ in qs)
    bad = set(rng.sample(qs[1:], min(n_bad, len(qs) - 1))) if len(qs) > 1 else set()

    def random_rule(q, top):
        if top == BOTTOM:
            push = rng.choice([(), (rng.choice(gamma),)])
        else:
            push = rng.choice([(), (top,), (rng.choice(gamma),), (rng.choice(gamma), top),
                               (rng.choice(gamma), rng.choice(gamma))])
        return Rule(q, top, rng.choice(qs), push)

    rules, drules = [], []
    for q in qs:
        for top in (*gamma, BOTTOM):
            rules.append(random_rule(q, top))
            for _ in range(2):
                if rng.random() < branching:
                    rules.append(random_rule(q, top))
            if not reach and owner[q] == 0 and rng.random() < disturbance_rate:
                drules.append(random_rule(q, top))
    return PushdownGameSpec(qs, owner, qs[0], gamma, rules, drules, bad,
                            objective="reach" if reach else "safety")
