"""Rigged games: Player 1 decides when disturbances happen.

Each Player-0 vertex ``v`` becomes a Player-1 vertex that either cedes the move to
a copy ``v~copy`` (owned by Player 0) or simulates a disturbance through a marked
auxiliary vertex. Player-1 moves are subdivided too, so plays alternate between
original and auxiliary vertices. Sinks are left alone.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable

from .model import (
    BOTTOM, FRONTIER, Config, ExplicitArena, Play, PositionalStrategy, PushdownGameSpec,
    Rule, StrategyUndefined, apply_rule,
)

DISTURBANCE = "disturbance"
PLAYER1_MOVE = "player1_move"


@dataclass(frozen=True)
class Owner0Copy:
    vertex: Hashable

    def __str__(self):
        return f"copy({self.vertex})"


@dataclass(frozen=True)
class EdgeVertex:
    source: Hashable
    target: Hashable
    kind: str

    def __str__(self):
        arrow = "~d~>" if self.kind == DISTURBANCE else "~e~>"
        return f"[{self.source} {arrow} {self.target}]"


def rig_arena(arena: ExplicitArena) -> ExplicitArena:
    labels = list(arena.labels)
    owner = [1] * arena.n
    succ: list[list[int]] = [[] for _ in range(arena.n)]
    marked = []

    def add(label, own, outs):
        labels.append(label)
        owner.append(own)
        succ.append(outs)
        return len(labels) - 1

    for v, lab in enumerate(arena.labels):
        if arena.is_sink(v):
            succ[v] = [v]
            continue
        if arena.owner[v] == 0:
            succ[v].append(add(Owner0Copy(lab), 0, list(arena.succ[v])))
            for u in arena.dsucc[v]:
                d = add(EdgeVertex(lab, arena.labels[u], DISTURBANCE), 1, [u])
                marked.append(d)
                succ[v].append(d)
        else:
            for u in arena.succ[v]:
                succ[v].append(add(EdgeVertex(lab, arena.labels[u], PLAYER1_MOVE), 1, [u]))
    return ExplicitArena(labels, owner, succ, None, arena.unsafe, marked, arena.initial,
                         arena.height)


def _keep(top: str) -> tuple[str, ...]:
    return () if top == BOTTOM else (top,)


def aux_state_name(rule: Rule, kind: str) -> str:
    w = ",".join(rule.push) if rule.push else "eps"
    return f"{rule.source}→{rule.target}[{rule.top}/{w}]~{'d' if kind == DISTURBANCE else 'e'}"


def rig_pds_with_origin(spec: PushdownGameSpec):
    """Rigged pushdown spec plus a map from new states to what they simulate.

    origin[s] is ``("copy", q)`` or ``(kind, rule)`` for auxiliary rule states.
    """
    tops = (*spec.stack_alphabet, BOTTOM)
    states = list(spec.states)
    owner = {q: 1 for q in spec.states}
    rules: list[Rule] = []
    origin: dict[str, tuple] = {}
    dstates = set()
    taken = set(spec.states)

    def new_state(name, own, what):
        if name in taken:
            raise ValueError(f"state name clash while rigging: {name!r}")
        taken.add(name)
        states.append(name)
        owner[name] = own
        origin[name] = what
        return name

    def simulate_rule(rule, kind):
        s = new_state(aux_state_name(rule, kind), 1, (kind, rule))
        rules.append(Rule(rule.source, rule.top, s, _keep(rule.top)))
        rules.append(Rule(s, rule.top, rule.target, rule.push))
        rules.extend(Rule(s, y, s, _keep(y)) for y in tops if y != rule.top)
        return s

    for q in spec.states:
        if spec.owner[q] != 0:
            continue
        c = new_state(f"{q}~copy", 0, ("copy", q))
        rules.extend(Rule(q, x, c, _keep(x)) for x in tops)
        rules.extend(Rule(c, r.top, r.target, r.push) for r in spec.transitions if r.source == q)
    for r in spec.disturbance_transitions:
        dstates.add(simulate_rule(r, DISTURBANCE))
    for r in spec.transitions:
        if spec.owner[r.source] == 1:
            simulate_rule(r, PLAYER1_MOVE)
    rigged = spec.replace(states=states, owner=owner, transitions=rules,
                          disturbance_transitions=(), dist_states=dstates)
    return rigged, origin


def rig_pds(spec: PushdownGameSpec) -> PushdownGameSpec:
    return rig_pds_with_origin(spec)[0]


def counter_state(q: str, c: int) -> str:
    return f"{q}@c{c}"


def counter_product(rigged: PushdownGameSpec, k: int) -> PushdownGameSpec:
    """Track simulated disturbances up to ``k``; reaching ``k`` makes the play safe."""
    if k < 1:
        raise ValueError("counter product needs k >= 1")
    tops = (*rigged.stack_alphabet, BOTTOM)
    states, owner, rules = [], {}, []
    for c in range(k + 1):
        for q in rigged.states:
            s = counter_state(q, c)
            states.append(s)
            owner[s] = rigged.owner[q]
            if c == k:
                rules.extend(Rule(s, y, s, _keep(y)) for y in tops)
    for r in rigged.transitions:
        bump = 1 if r.source in rigged.dist_states else 0
        for c in range(k):
            rules.append(Rule(counter_state(r.source, c), r.top,
                              counter_state(r.target, min(c + bump, k)), r.push))
    return rigged.replace(
        states=states, owner=owner, initial_state=counter_state(rigged.initial_state, 0),
        transitions=rules, disturbance_transitions=(),
        unsafe_states={counter_state(q, c) for q in rigged.unsafe_states for c in range(k)},
        dist_states={counter_state(q, c) for q in rigged.dist_states for c in range(k)})


def translate_play_up(play: Play, original: ExplicitArena, rigged: ExplicitArena) -> Play:
    """Map a play with disturbances to the equivalent disturbance-free rigged play."""
    labs, idx = original.labels, rigged.index
    out = [(play.steps[0][0], 0)]
    for (u, _), (v, bit) in zip(play.steps, play.steps[1:]):
        if original.is_sink(u):
            out.append((v, 0))
            continue
        if bit:
            aux = EdgeVertex(labs[u], labs[v], DISTURBANCE)
        elif original.owner[u] == 0:
            aux = Owner0Copy(labs[u])
        else:
            aux = EdgeVertex(labs[u], labs[v], PLAYER1_MOVE)
        out.append((idx[aux], 0))
        out.append((v, 0))
    return Play(tuple(out))


def _translate_play_down(play: Play, original: ExplicitArena, rigged: ExplicitArena) -> Play:
    """Inverse of :func:`translate_play_up` for plays starting at an original vertex."""
    out = []
    pending_bit = 0
    for v, _ in play.steps:
        if v < original.n:
            out.append((v, pending_bit if out else 0))
            pending_bit = 0
        else:
            lab = rigged.labels[v]
            pending_bit = int(isinstance(lab, EdgeVertex) and lab.kind == DISTURBANCE)
    return Play(tuple(out))


def lift_strategy_down(rigged_strategy: PositionalStrategy, rigged: ExplicitArena,
                       original: ExplicitArena) -> PositionalStrategy:
    """Read the copy vertex's choice at every Player-0 vertex of the original arena."""
    choice = {}
    for v in range(original.n):
        if original.owner[v] != 0 or original.is_sink(v):
            continue
        c = rigged.index.get(Owner0Copy(original.labels[v]))
        if c is None:
            raise StrategyUndefined(f"no copy of {original.labels[v]} in rigged arena")
        if c in rigged_strategy:
            choice[v] = original.index[rigged.labels[rigged_strategy(c)]]
    return PositionalStrategy(0, choice)


def rigged_label(config: Config, origin: dict, spec: PushdownGameSpec, max_height: int):
    """Rigged-arena label of a configuration of ``rig_pds(spec)`` (commuting square)."""
    what = origin.get(config.state)
    if what is None:
        return config
    if what[0] == "copy":
        return Owner0Copy(Config(what[1], config.stack))
    kind, rule = what
    nxt = apply_rule(rule, config.stack)
    tgt = Config(rule.target, nxt) if len(nxt) <= max_height else FRONTIER
    return EdgeVertex(Config(rule.source, config.stack), tgt, kind)
