"""Disturbance-free solving on explicit arenas: attractors, safety and Büchi."""

from __future__ import annotations

from collections import deque
from typing import Iterable, NamedTuple

from .model import ExplicitArena, PositionalStrategy


def _attract(arena: ExplicitArena, target: Iterable[int], player: int, within=None):
    """Core attractor; ``within`` (bytearray or None) restricts to a subgame.

    Returns (membership bytearray, attacker choices).
    """
    n = arena.n
    owner, succ, pred = arena.owner, arena.succ, arena.pred
    inside = bytearray(n)
    if within is None:
        count = [len(s) for s in succ]
    else:
        count = [sum(within[u] for u in s) if within[v] else 0 for v, s in enumerate(succ)]
    queue = deque()
    for t in target:
        if not inside[t] and (within is None or within[t]):
            inside[t] = 1
            queue.append(t)
    choice: dict[int, int] = {}
    while queue:
        u = queue.popleft()
        for p in pred[u]:
            if inside[p] or (within is not None and not within[p]):
                continue
            if owner[p] == player:
                inside[p] = 1
                choice[p] = u
                queue.append(p)
            else:
                count[p] -= 1
                if count[p] == 0:
                    inside[p] = 1
                    queue.append(p)
    return inside, choice


def _trap_choices(arena: ExplicitArena, inside, defender: int, within=None) -> dict[int, int]:
    choice = {}
    for v in range(arena.n):
        if arena.owner[v] == defender and not inside[v] and (within is None or within[v]):
            for u in arena.succ[v]:
                if not inside[u] and (within is None or within[u]):
                    choice[v] = u
                    break
    return choice


def attractor(arena: ExplicitArena, target: Iterable[int], player: int):
    """Attractor of ``target`` for ``player`` with attacker and trap strategies."""
    inside, choice = _attract(arena, target, player)
    region = frozenset(v for v in range(arena.n) if inside[v])
    return (region, PositionalStrategy(player, choice),
            PositionalStrategy(1 - player, _trap_choices(arena, inside, 1 - player)))


class SafetySolution(NamedTuple):
    w0: frozenset
    w1: frozenset
    strategy0: PositionalStrategy
    strategy1: PositionalStrategy


def solve_safety(arena: ExplicitArena, unsafe: Iterable[int] | None = None) -> SafetySolution:
    bad = arena.unsafe if unsafe is None else unsafe
    inside, choice = _attract(arena, bad, 1)
    for v in range(arena.n):  # make Player 1 total on W1
        if inside[v] and arena.owner[v] == 1 and v not in choice:
            choice[v] = arena.succ[v][0]
    w1 = frozenset(v for v in range(arena.n) if inside[v])
    w0 = frozenset(range(arena.n)) - w1
    return SafetySolution(w0, w1, PositionalStrategy(0, _trap_choices(arena, inside, 0)),
                          PositionalStrategy(1, choice))


def initial_safe(arena: ExplicitArena, unsafe: Iterable[int] | None = None) -> bool:
    """Does Player 0 win the safety game from the initial vertex?"""
    inside, _ = _attract(arena, arena.unsafe if unsafe is None else unsafe, 1)
    return not inside[arena.initial]


def solve_buchi(arena: ExplicitArena, accepting: Iterable[int]):
    """Classical nested fixpoint. Returns (W0, W1, Player-0 strategy on W0)."""
    acc = frozenset(accepting)
    n = arena.n
    game = bytearray(b"\x01") * n
    w1 = set()
    while True:
        reach, choice = _attract(arena, [v for v in acc if game[v]], 0, game)
        trap = [v for v in range(n) if game[v] and not reach[v]]
        if not trap:
            break
        lost, _ = _attract(arena, trap, 1, game)
        for v in range(n):
            if lost[v]:
                game[v] = 0
                w1.add(v)
    w0 = frozenset(v for v in range(n) if game[v])
    strat = {}
    for v in w0:
        if arena.owner[v] != 0:
            continue
        if v in choice:
            strat[v] = choice[v]
        else:  # accepting: stay inside the winning region
            strat[v] = next(u for u in arena.succ[v] if game[u])
    return w0, frozenset(w1), PositionalStrategy(0, strat)


def solve_union_safety_or_buchi(arena: ExplicitArena, unsafe: Iterable[int],
                                accepting: Iterable[int]):
    """Player 0 wins plays that avoid ``unsafe`` or visit ``accepting`` infinitely often.

    Solved as Büchi on a product with a monotone bit recording an unsafe visit:
    accepting product vertices are those with bit 0 (still safe) or an accepting
    original vertex.
    """
    bad, acc = frozenset(unsafe), frozenset(accepting)
    n = arena.n

    def vid(v, bit):
        return 2 * v + bit

    succ = []
    owner = []
    for pv in range(2 * n):
        v, bit = divmod(pv, 2)
        owner.append(arena.owner[v])
        succ.append([vid(u, bit or (u in bad)) for u in arena.succ[v]])
    prod = ExplicitArena(list(range(2 * n)), owner, succ)
    prod_acc = [pv for pv in range(2 * n) if pv % 2 == 0 or pv // 2 in acc]
    pw0, _, _ = solve_buchi(prod, prod_acc)
    w0 = frozenset(v for v in range(n) if vid(v, int(v in bad)) in pw0)
    return w0, frozenset(range(n)) - w0
