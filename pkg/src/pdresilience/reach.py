"""Optimal reachability values through the edge-splitting reduction to resilience.

Every move of the reachability game becomes a detour through a fresh edge state
that only a disturbance can leave, with the players swapped. One disturbance then
buys one move, so the resilience of the safety game is the number of moves an
optimal reaching strategy needs.
"""

from __future__ import annotations

from .engine import resilience_initial
from .model import (
    BOTTOM, OMEGA_PLUS_ONE, ExplicitArena, Finite, PushdownGameSpec, ResilienceValue, Rule,
    fresh_name,
)


def _keep(top):
    return () if top == BOTTOM else (top,)


def edge_state_name(rule: Rule) -> str:
    w = ",".join(rule.push) if rule.push else "eps"
    return f"{rule.source}→{rule.target}[{rule.top}/{w}]"


def split_edges_transform(spec: PushdownGameSpec) -> PushdownGameSpec:
    if spec.disturbance_transitions:
        raise ValueError("reachability spec must not have disturbance rules")
    tops = (*spec.stack_alphabet, BOTTOM)
    taken = set(spec.states)
    states = list(spec.states)
    owner = {q: 1 - spec.owner[q] for q in spec.states}
    rules, drules = [], []
    for r in spec.transitions:
        e = fresh_name(edge_state_name(r), taken)
        taken.add(e)
        states.append(e)
        owner[e] = 0
        rules.append(Rule(r.source, r.top, e, _keep(r.top)))
        rules.extend(Rule(e, y, e, _keep(y)) for y in tops)
        drules.append(Rule(e, r.top, r.target, r.push))
    return spec.replace(states=states, owner=owner, transitions=rules,
                        disturbance_transitions=drules, objective="safety")


def optimal_reach_value(spec: PushdownGameSpec, height_cap: int | None = None,
                        **kwargs) -> ResilienceValue:
    """Steps an optimal strategy needs to reach the targets (omega+1: cannot reach)."""
    if spec.objective != "reach":
        raise ValueError("expected a reachability spec")
    return resilience_initial(split_edges_transform(spec), height_cap, **kwargs)


def backward_induction_oracle(arena: ExplicitArena, target=None) -> dict[int, ResilienceValue]:
    """Attractor layers by value iteration: min over own moves, max over the opponent's."""
    goal = arena.unsafe if target is None else frozenset(target)
    INF = float("inf")
    val = [0 if v in goal else INF for v in range(arena.n)]
    for _ in range(arena.n):
        new = list(val)
        for v in range(arena.n):
            if v in goal:
                continue
            succ = [val[u] for u in arena.succ[v]]
            new[v] = 1 + (min(succ) if arena.owner[v] == 0 else max(succ))
        if new == val:
            break
        val = new
    return {v: OMEGA_PLUS_ONE if x == INF else Finite(int(x)) for v, x in enumerate(val)}
