"""Strategy graphs: finite certificates that Player 1 wins the k-disturbance game.

A graph lives in the rigged configuration graph of an F-sink-normalized one-counter
spec. ``mu_r`` bounds the simulated disturbances still to come, ``mu_d`` the
distance to F.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping, NamedTuple

from .engine import player1_wins_budget
from .model import (
    OPTIMISTIC, PESSIMISTIC, Certificate, Config, ExplicitArena, PositionalStrategy,
    PushdownGameSpec, expand_truncated, is_f_sink_normal, parse_stack_word, stack_word,
)
from .rigging import rig_pds

DEFAULT_GRAPH_HEIGHT = 256


class ExtractionError(RuntimeError):
    def __init__(self, message: str, witness: list):
        super().__init__(f"{message}; witness: {' -> '.join(map(str, witness))}")
        self.witness = witness


class Violation(NamedTuple):
    prop: str
    vertex: object = None
    edge: object = None
    message: str = ""

    def __str__(self):
        where = f" at {self.vertex}" if self.vertex is not None else ""
        if self.edge is not None:
            where += f" on edge {self.edge[0]} -> {self.edge[1]}"
        return f"property {self.prop}{where}: {self.message}"


@dataclass(frozen=True)
class StrategyGraph:
    k: int
    vertices: tuple[Config, ...]
    edges: tuple[tuple[Config, Config], ...]
    mu_r: Mapping[Config, int] = field(default_factory=dict)
    mu_d: Mapping[Config, int] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(sorted(set(self.vertices))))
        object.__setattr__(self, "edges", tuple(sorted(set(self.edges))))
        object.__setattr__(self, "mu_r", MappingProxyType(dict(self.mu_r)))
        object.__setattr__(self, "mu_d", MappingProxyType(dict(self.mu_d)))

    def successors(self) -> dict[Config, list[Config]]:
        out: dict[Config, list[Config]] = {v: [] for v in self.vertices}
        for u, w in self.edges:
            out.setdefault(u, []).append(w)
        return out

    def to_text(self) -> str:
        lines = [f"k {self.k}"]
        lines += [f"{v.state} {stack_word(v.stack)} {self.mu_r.get(v, -1)} {self.mu_d.get(v, -1)}"
                  for v in self.vertices]
        lines += [f"{u.state} {stack_word(u.stack)} -> {w.state} {stack_word(w.stack)}"
                  for u, w in self.edges]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "StrategyGraph":
        k = None
        verts, edges, mu_r, mu_d = [], [], {}, {}
        for no, raw in enumerate(text.splitlines(), 1):
            tok = raw.split("#", 1)[0].split()
            if not tok:
                continue
            try:
                if tok[0] == "k" and len(tok) == 2:
                    k = int(tok[1])
                elif len(tok) == 4:
                    v = Config(tok[0], parse_stack_word(tok[1]))
                    verts.append(v)
                    mu_r[v], mu_d[v] = int(tok[2]), int(tok[3])
                elif len(tok) == 5 and tok[2] == "->":
                    edges.append((Config(tok[0], parse_stack_word(tok[1])),
                                  Config(tok[3], parse_stack_word(tok[4]))))
                else:
                    raise ValueError("expected 'k K', 'state stack mu_r mu_d' or an edge")
            except ValueError as exc:
                raise ValueError(f"line {no}: {exc}") from None
        if k is None:
            raise ValueError("missing 'k' line")
        return cls(k, tuple(verts), tuple(edges), mu_r, mu_d)


def level_bound(spec: PushdownGameSpec, k: int) -> int:
    return (2 * k) ** (len(spec.states) ** 2)


def _require_normal(spec: PushdownGameSpec):
    if not spec.is_one_counter:
        raise ValueError("strategy graphs need a one-counter spec")
    if not is_f_sink_normal(spec):
        raise ValueError("spec must be F-sink normalized (see f_sink_normalize)")


def verify_strategy_graph(graph: StrategyGraph, spec: PushdownGameSpec, k: int) -> list[Violation]:
    _require_normal(spec)
    rigged = rig_pds(spec)
    F, D = rigged.unsafe_states, rigged.dist_states
    bound = level_bound(spec, k)
    V = set(graph.vertices)
    out_edges = graph.successors()
    bad: list[Violation] = []
    if graph.k != k:
        bad.append(Violation("structural", message=f"graph built for k={graph.k}, checked at k={k}"))
    root = rigged.initial_config
    if root not in V:
        bad.append(Violation("1", root, None, "initial vertex missing"))
    real = set()
    for v in graph.vertices:
        if v.state not in rigged.owner:
            bad.append(Violation("structural", v, None, "not a vertex of the rigged graph"))
            continue
        real.add(v)
        if v.height > bound:
            bad.append(Violation("1", v, None, f"stack height exceeds {bound}"))
        if v not in graph.mu_r or v not in graph.mu_d:
            bad.append(Violation("structural", v, None, "missing rank"))
            continue
        if not 0 <= graph.mu_r[v] <= k - 1:
            bad.append(Violation("4", v, None, f"mu_r={graph.mu_r[v]} outside 0..{k - 1}"))
        if not 0 <= graph.mu_d[v] <= len(V):
            bad.append(Violation("5", v, None, f"mu_d={graph.mu_d[v]} outside 0..{len(V)}"))
    for u, w in graph.edges:
        if u not in V or w not in V:
            bad.append(Violation("structural", u, (u, w), "edge endpoint not in vertex set"))
            continue
        if u not in real or w not in rigged.successors(u):
            bad.append(Violation("structural", u, (u, w), "not an edge of the rigged graph"))
            continue
        ru, rw = graph.mu_r.get(u), graph.mu_r.get(w)
        if ru is not None and rw is not None:
            if u.state in D and not ru > rw:
                bad.append(Violation("4", u, (u, w), "mu_r must drop after a disturbance"))
            elif ru < rw:
                bad.append(Violation("4", u, (u, w), "mu_r increases"))
        du, dw = graph.mu_d.get(u), graph.mu_d.get(w)
        if du is not None and dw is not None and not du > dw:
            bad.append(Violation("5", u, (u, w), "mu_d must strictly decrease"))
    for v in real:
        if v.state in F:
            continue
        outs = set(out_edges.get(v, ()))
        if rigged.owner[v.state] == 0:
            for w in rigged.successors(v):
                if w not in outs:
                    bad.append(Violation("2", v, (v, w), "Player-0 edge missing"))
        elif len(outs) != 1:
            bad.append(Violation("3", v, None, f"Player-1 vertex has {len(outs)} edges, needs 1"))
    return bad


def rank_attacker(arena: ExplicitArena):
    """Layered Player-1 attractor on a rigged arena.

    Layer j holds the vertices from which Player 1 forces F with at most j visits
    to marked (disturbance) vertices. Returns (layer list, Player-1 strategy).
    """
    n = arena.n
    owner, pred, succ, marked = arena.owner, arena.pred, arena.succ, arena.marked
    count = [len(s) for s in succ]
    layer = [-1] * n
    choice: dict[int, int] = {}
    targets = sorted(arena.unsafe)
    for t in targets:
        if owner[t] == 1:
            choice[t] = succ[t][0]
    j = 0
    while targets:
        queue = deque()
        for t in targets:
            if layer[t] < 0:
                layer[t] = j
                queue.append(t)
        pending = set()
        while queue:
            u = queue.popleft()
            for p in pred[u]:
                if layer[p] >= 0:
                    continue
                if p in marked:
                    pending.add(p)
                elif owner[p] == 1:
                    layer[p] = j
                    choice[p] = u
                    queue.append(p)
                else:
                    count[p] -= 1
                    if count[p] == 0:
                        layer[p] = j
                        queue.append(p)
        targets = sorted(p for p in pending if layer[p] < 0)
        for p in targets:
            choice[p] = succ[p][0]
        j += 1
    return layer, PositionalStrategy(1, choice)


def extract_strategy_graph(spec: PushdownGameSpec, k: int, strategy: PositionalStrategy,
                           arena: ExplicitArena) -> StrategyGraph:
    """Unfold ``strategy`` (Player 1, on ``arena`` = truncated rigged graph) from the root."""
    F, marked, owner = arena.unsafe, arena.marked, arena.owner

    def nexts(v):
        if v in F:
            return ()
        if owner[v] == 0:
            return arena.succ[v]
        if v not in strategy:
            raise ExtractionError("strategy undefined at a consistent vertex", [arena.labels[v]])
        return (strategy(v),)

    root = arena.initial
    colour = {root: 1}
    parent = {root: None}
    order = []
    stack = [(root, iter(nexts(root)))]
    while stack:
        v, it = stack[-1]
        u = next(it, None)
        if u is None:
            stack.pop()
            colour[v] = 2
            order.append(v)
            continue
        if arena.is_sink(u) and u not in F:
            raise ExtractionError("strategy escapes the truncation", _path(parent, v, arena) + [arena.labels[u]])
        c = colour.get(u, 0)
        if c == 1:
            raise ExtractionError("consistent play loops without reaching F",
                                  _path(parent, v, arena) + [arena.labels[u]])
        if c == 0:
            colour[u] = 1
            parent[u] = v
            stack.append((u, iter(nexts(u))))
    mu_d, mu_r, best = {}, {}, {}
    for v in order:  # post-order: successors first
        outs = nexts(v)
        if not outs:
            mu_d[v] = mu_r[v] = 0
            continue
        mu_d[v] = 1 + max(mu_d[u] for u in outs)
        best[v] = max(outs, key=lambda u: mu_r[u])
        mu_r[v] = mu_r[best[v]] + (1 if v in marked else 0)
    if mu_r[root] > k - 1:
        path, v = [], root
        while v in best:
            path.append(arena.labels[v])
            v = best[v]
        raise ExtractionError(f"a consistent play needs {mu_r[root]} >= k disturbances",
                              path + [arena.labels[v]])
    lab = arena.labels
    edges = [(lab[v], lab[u]) for v in order for u in nexts(v)]
    return StrategyGraph(k, tuple(lab[v] for v in order), tuple(edges),
                         {lab[v]: mu_r[v] for v in order}, {lab[v]: mu_d[v] for v in order})


def _path(parent, v, arena):
    out = []
    while v is not None:
        out.append(arena.labels[v])
        v = parent[v]
    return out[::-1]


class GraphResult(NamedTuple):
    exists: bool
    graph: StrategyGraph | None
    certificate: Certificate


def strategy_graph_exists(spec: PushdownGameSpec, k: int,
                          height_cap: int | None = DEFAULT_GRAPH_HEIGHT) -> GraphResult:
    """Decide whether Player 1 wins with fewer than ``k`` disturbances, with a certificate."""
    _require_normal(spec)
    if k < 1:
        raise ValueError("k must be positive")
    bound = level_bound(spec, k)
    T = bound if height_cap is None else min(bound, height_cap)
    rigged = rig_pds(spec)
    if not player1_wins_budget(rigged, k, T):
        exact = T >= bound or not player1_wins_budget(rigged, k, T, PESSIMISTIC)
        return GraphResult(False, None, Certificate.EXACT if exact else Certificate.HEURISTIC)
    arena = expand_truncated(rigged, T, OPTIMISTIC)
    layer, strategy = rank_attacker(arena)
    if not 0 <= layer[arena.initial] <= k - 1:
        raise AssertionError("layered attractor disagrees with the counter product")
    graph = extract_strategy_graph(spec, k, strategy, arena)
    problems = verify_strategy_graph(graph, spec, k)
    if problems:
        raise AssertionError("extracted graph failed verification: " + "; ".join(map(str, problems)))
    return GraphResult(True, graph, Certificate.EXACT)


def graph_strategy(graph: StrategyGraph, arena: ExplicitArena) -> PositionalStrategy:
    """Positional Player-1 strategy read off a graph (unique edge at Player-1 vertices)."""
    choice = {}
    for u, w in graph.edges:
        i = arena.index.get(u)
        if i is not None and arena.owner[i] == 1 and w in arena.index:
            choice[i] = arena.index[w]
    return PositionalStrategy(1, choice)
