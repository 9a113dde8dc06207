"""Pushdown game specifications, explicit arenas, plays, strategies and values.

Stacks are tuples stored top-first; the bottom marker ``_`` is implicit and never
stored. A configuration ``(q, ("A", "B"))`` therefore has stack ``AB_`` with ``A`` on
top and stack height 2.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property, total_ordering
from types import MappingProxyType
from typing import Hashable, Iterable, Mapping, NamedTuple, Sequence

BOTTOM = "_"
OPTIMISTIC = "optimistic"
PESSIMISTIC = "pessimistic"


class SpecError(ValueError):
    """A game specification violates a well-formedness rule."""

    def __init__(self, message: str, rule: "Rule | None" = None):
        super().__init__(message if rule is None else f"{message}: {rule}")
        self.rule = rule


class ArenaTooLarge(RuntimeError):
    pass


class StrategyUndefined(KeyError):
    """A positional strategy was queried at a vertex it does not cover."""

    def __str__(self):
        return str(self.args[0]) if self.args else "strategy undefined"


@dataclass(frozen=True, order=True)
class Rule:
    """``(source, top) -> (target, push)``; ``push`` replaces ``top`` (top-first).

    For ``top == BOTTOM`` the pushed word sits above the bottom, which stays.
    """

    source: str
    top: str
    target: str
    push: tuple[str, ...] = ()

    def __str__(self):
        w = " ".join(self.push) if self.push else "eps"
        return f"{self.source} {self.top} -> {self.target} {w}"


def apply_rule(rule: Rule, stack: tuple[str, ...]) -> tuple[str, ...]:
    if rule.top == BOTTOM:
        return rule.push + stack
    return rule.push + stack[1:]


class Config(NamedTuple):
    state: str
    stack: tuple[str, ...]

    @property
    def height(self) -> int:
        return len(self.stack)

    def __str__(self):
        return f"{self.state} {stack_word(self.stack)}"


def stack_word(stack: Sequence[str]) -> str:
    return ".".join((*stack, BOTTOM))


def parse_stack_word(word: str) -> tuple[str, ...]:
    parts = word.split(".")
    if not parts or parts[-1] != BOTTOM or BOTTOM in parts[:-1] or "" in parts:
        raise ValueError(f"malformed stack word {word!r}")
    return tuple(parts[:-1])


@dataclass(frozen=True)
class Sink:
    name: str

    def __str__(self):
        return f"<{self.name}>"


FRONTIER = Sink("frontier")


@dataclass(frozen=True)
class PushdownGameSpec:
    """A pushdown (or one-counter) game with disturbances.

    ``unsafe_states`` is the set F: states to avoid for a safety objective, or the
    target states when ``objective == "reach"``. ``dist_states`` marks states whose
    configurations stand for simulated disturbances (set by rigging).
    """

    states: tuple[str, ...]
    owner: Mapping[str, int]
    initial_state: str
    stack_alphabet: tuple[str, ...]
    transitions: tuple[Rule, ...]
    disturbance_transitions: tuple[Rule, ...] = ()
    unsafe_states: frozenset[str] = frozenset()
    dist_states: frozenset[str] = frozenset()
    objective: str = "safety"

    def __post_init__(self):
        set_ = object.__setattr__
        set_(self, "states", tuple(self.states))
        set_(self, "owner", MappingProxyType(dict(self.owner)))
        set_(self, "stack_alphabet", tuple(self.stack_alphabet))
        set_(self, "transitions", tuple(sorted(set(self.transitions))))
        set_(self, "disturbance_transitions", tuple(sorted(set(self.disturbance_transitions))))
        set_(self, "unsafe_states", frozenset(self.unsafe_states))
        set_(self, "dist_states", frozenset(self.dist_states))
        self._validate()

    def __eq__(self, other):
        if not isinstance(other, PushdownGameSpec):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def _key(self):
        return (self.states, tuple(sorted(self.owner.items())), self.initial_state,
                self.stack_alphabet, self.transitions, self.disturbance_transitions,
                self.unsafe_states, self.dist_states, self.objective)

    def _validate(self):
        if not self.states:
            raise SpecError("no states")
        if len(set(self.states)) != len(self.states):
            raise SpecError("duplicate state names")
        for q in self.states:
            if self.owner.get(q) not in (0, 1):
                raise SpecError(f"state {q!r} has no owner in {{0,1}}")
        if set(self.owner) - set(self.states):
            raise SpecError("owner given for undeclared state")
        if self.initial_state not in self.states:
            raise SpecError(f"initial state {self.initial_state!r} undeclared")
        if not self.stack_alphabet:
            raise SpecError("empty stack alphabet")
        if len(set(self.stack_alphabet)) != len(self.stack_alphabet):
            raise SpecError("duplicate stack symbols")
        for x in self.stack_alphabet:
            if x in (BOTTOM, "eps") or not x or any(c.isspace() or c in ".#" for c in x):
                raise SpecError(f"illegal stack symbol {x!r}")
        for q in self.states:
            if not q or q.startswith("<") or any(c.isspace() or c == "#" for c in q):
                raise SpecError(f"illegal state name {q!r}")
        if not self.unsafe_states <= set(self.states):
            raise SpecError("unsafe/target set mentions undeclared states")
        if not self.dist_states <= set(self.states):
            raise SpecError("dist_states mentions undeclared states")
        if self.objective not in ("safety", "reach"):
            raise SpecError(f"unknown objective {self.objective!r}")
        alphabet = set(self.stack_alphabet)
        for rule in (*self.transitions, *self.disturbance_transitions):
            if rule.source not in self.owner or rule.target not in self.owner:
                raise SpecError("rule mentions undeclared state", rule)
            if rule.top != BOTTOM and rule.top not in alphabet:
                raise SpecError("rule reads unknown stack symbol", rule)
            if any(x not in alphabet for x in rule.push):
                raise SpecError("rule pushes unknown stack symbol (bottom cannot be written)", rule)
            limit = 1 if rule.top == BOTTOM else 2
            if len(rule.push) > limit:
                raise SpecError(f"rule writes more than {limit} symbol(s)", rule)
        for rule in self.disturbance_transitions:
            if self.owner[rule.source] != 0:
                raise SpecError("disturbance rule from a Player-1 state", rule)
        for q in self.states:
            for x in (*self.stack_alphabet, BOTTOM):
                if not self.rules_from.get((q, x)):
                    raise SpecError(f"deadlock: no rule for state {q!r} with top {x!r}")

    @cached_property
    def rules_from(self) -> dict[tuple[str, str], tuple[Rule, ...]]:
        out: dict[tuple[str, str], list[Rule]] = {}
        for r in self.transitions:
            out.setdefault((r.source, r.top), []).append(r)
        return {k: tuple(v) for k, v in out.items()}

    @cached_property
    def drules_from(self) -> dict[tuple[str, str], tuple[Rule, ...]]:
        out: dict[tuple[str, str], list[Rule]] = {}
        for r in self.disturbance_transitions:
            out.setdefault((r.source, r.top), []).append(r)
        return {k: tuple(v) for k, v in out.items()}

    @property
    def is_one_counter(self) -> bool:
        return len(self.stack_alphabet) == 1

    @property
    def initial_config(self) -> Config:
        return Config(self.initial_state, ())

    def successors(self, config: Config) -> list[Config]:
        top = config.stack[0] if config.stack else BOTTOM
        return sorted({Config(r.target, apply_rule(r, config.stack))
                       for r in self.rules_from.get((config.state, top), ())})

    def disturbance_successors(self, config: Config) -> list[Config]:
        top = config.stack[0] if config.stack else BOTTOM
        return sorted({Config(r.target, apply_rule(r, config.stack))
                       for r in self.drules_from.get((config.state, top), ())})

    def replace(self, **changes) -> "PushdownGameSpec":
        fields_ = dict(states=self.states, owner=self.owner, initial_state=self.initial_state,
                       stack_alphabet=self.stack_alphabet, transitions=self.transitions,
                       disturbance_transitions=self.disturbance_transitions,
                       unsafe_states=self.unsafe_states, dist_states=self.dist_states,
                       objective=self.objective)
        fields_.update(changes)
        return PushdownGameSpec(**fields_)


class ExplicitArena:
    """A finite arena over interned integer vertices with a label side table.

    ``succ``/``dsucc`` are sorted tuples of successor indices. ``marked`` flags
    vertices standing for simulated disturbances (rigged arenas only).
    """

    def __init__(self, labels: Sequence[Hashable], owner: Sequence[int],
                 succ: Sequence[Iterable[int]], dsucc: Sequence[Iterable[int]] | None = None,
                 unsafe: Iterable[int] = (), marked: Iterable[int] = (), initial: int = 0,
                 height: int | None = None):
        self.labels = tuple(labels)
        self.owner = tuple(owner)
        self.succ = tuple(tuple(sorted(set(s))) for s in succ)
        n = len(self.labels)
        self.dsucc = (tuple(tuple(sorted(set(s))) for s in dsucc) if dsucc is not None
                      else ((),) * n)
        self.unsafe = frozenset(unsafe)
        self.marked = frozenset(marked)
        self.initial = initial
        self.height = height
        if not (len(self.owner) == len(self.succ) == len(self.dsucc) == n):
            raise ValueError("inconsistent arena component lengths")

    @property
    def n(self) -> int:
        return len(self.labels)

    def __len__(self):
        return len(self.labels)

    @cached_property
    def index(self) -> dict[Hashable, int]:
        return {lab: i for i, lab in enumerate(self.labels)}

    @cached_property
    def pred(self) -> tuple[tuple[int, ...], ...]:
        return _reverse(self.succ)

    @cached_property
    def dpred(self) -> tuple[tuple[int, ...], ...]:
        return _reverse(self.dsucc)

    def is_sink(self, v: int) -> bool:
        return isinstance(self.labels[v], Sink)

    def validate(self) -> None:
        for v in range(self.n):
            if not self.succ[v]:
                raise ValueError(f"dead end at {self.labels[v]}")
            if any(not 0 <= u < self.n for u in (*self.succ[v], *self.dsucc[v])):
                raise ValueError(f"edge out of range at {self.labels[v]}")
            if self.dsucc[v] and self.owner[v] != 0:
                raise ValueError(f"disturbance edge from Player-1 vertex {self.labels[v]}")
            if self.is_sink(v) and (self.succ[v] != (v,) or self.dsucc[v]):
                raise ValueError(f"sink {self.labels[v]} is not a plain self-loop")

    def edge_count(self) -> int:
        return sum(map(len, self.succ))


def _reverse(adj):
    rev: list[list[int]] = [[] for _ in adj]
    for v, outs in enumerate(adj):
        for u in outs:
            rev[u].append(v)
    return tuple(tuple(r) for r in rev)


def expand_truncated(spec: PushdownGameSpec, max_height: int, frontier_mode: str = OPTIMISTIC,
                     max_vertices: int | None = 5_000_000) -> ExplicitArena:
    """Breadth-first expansion of the configurations reachable from ``(q_I, _)``.

    Moves that would exceed ``max_height`` lead to a single frontier sink, which is
    unsafe only in pessimistic mode. The sink is always the last vertex.
    """
    if max_height < 0:
        raise ValueError("max_height must be nonnegative")
    if frontier_mode not in (OPTIMISTIC, PESSIMISTIC):
        raise ValueError(f"unknown frontier mode {frontier_mode!r}")
    rules_from, drules_from = spec.rules_from, spec.drules_from
    init = spec.initial_config
    labels: list = [init]
    index = {init: 0}
    succ: list[list[int]] = []
    dsucc: list[list[int]] = []

    def target(rule, stack):
        new = rule.push + (stack if rule.top == BOTTOM else stack[1:])
        if len(new) > max_height:
            return -1
        c = Config(rule.target, new)
        i = index.get(c)
        if i is None:
            i = index[c] = len(labels)
            labels.append(c)
            if max_vertices is not None and i >= max_vertices:
                raise ArenaTooLarge(f"truncation exceeds {max_vertices} vertices")
        return i

    i = 0
    while i < len(labels):
        q, stack = labels[i]
        key = (q, stack[0] if stack else BOTTOM)
        succ.append([target(r, stack) for r in rules_from[key]])
        drs = drules_from.get(key)
        dsucc.append([target(r, stack) for r in drs] if drs else [])
        i += 1

    front = len(labels)
    labels.append(FRONTIER)
    succ.append([front])
    dsucc.append([])
    succ = [[front if u < 0 else u for u in s] for s in succ]
    dsucc = [[front if u < 0 else u for u in s] for s in dsucc]
    owner = [spec.owner[c.state] for c in labels[:-1]] + [1]
    unsafe = [v for v, c in enumerate(labels[:-1]) if c.state in spec.unsafe_states]
    if frontier_mode == PESSIMISTIC:
        unsafe.append(front)
    marked = [v for v, c in enumerate(labels[:-1]) if c.state in spec.dist_states]
    return ExplicitArena(labels, owner, succ, dsucc, unsafe, marked, 0, max_height)


def fresh_name(base: str, taken) -> str:
    name = base
    while name in taken:
        name += "'"
    return name


def f_sink_normalize(spec: PushdownGameSpec) -> PushdownGameSpec:
    """Make every unsafe configuration pop down to height 0 and enter a fresh sink ``q_f``.

    Afterwards ``q_f`` is the only unsafe state, so every reachable unsafe vertex is
    an absorbing height-0 configuration.
    """
    qf = fresh_name("q_f", set(spec.states))
    bad = spec.unsafe_states
    rules = [r for r in spec.transitions if r.source not in bad]
    for q in sorted(bad):
        rules += [Rule(q, x, q, ()) for x in spec.stack_alphabet]
        rules.append(Rule(q, BOTTOM, qf, ()))
    rules += [Rule(qf, x, qf, (x,)) for x in spec.stack_alphabet]
    rules.append(Rule(qf, BOTTOM, qf, ()))
    owner = dict(spec.owner)
    owner[qf] = 1
    return spec.replace(
        states=(*spec.states, qf), owner=owner, transitions=rules,
        disturbance_transitions=[r for r in spec.disturbance_transitions if r.source not in bad],
        unsafe_states={qf})


def is_f_sink_normal(spec: PushdownGameSpec) -> bool:
    if len(spec.unsafe_states) != 1:
        return False
    (qf,) = spec.unsafe_states
    at_bottom = spec.rules_from[(qf, BOTTOM)]
    return (at_bottom == (Rule(qf, BOTTOM, qf, ()),)
            and not any(r.source == qf for r in spec.disturbance_transitions)
            and all(r.source == qf or r.target != qf or r.top == BOTTOM and not r.push
                    for r in spec.transitions))


class Certificate(Enum):
    EXACT = "exact"
    SOUND_LOWER_BOUND = "sound-lb"
    HEURISTIC = "heuristic"

    @property
    def strength(self) -> int:
        return {"exact": 2, "sound-lb": 1, "heuristic": 0}[self.value]


def weakest(*certs: Certificate) -> Certificate:
    return min(certs, key=lambda c: c.strength)


FINITE, OMEGA, OMEGA_PLUS_ONE_KIND = "finite", "omega", "omega+1"


@total_ordering
@dataclass(frozen=True, eq=False)
class ResilienceValue:
    """An element of omega+2 plus a certificate tier.

    Comparison and hashing ignore the certificate and ``uniform`` flag.
    ``uniform`` is only meaningful for omega: True, False or None (unknown).
    """

    kind: str
    k: int = 0
    uniform: bool | None = None
    certificate: Certificate = Certificate.EXACT

    def __post_init__(self):
        if self.kind not in (FINITE, OMEGA, OMEGA_PLUS_ONE_KIND):
            raise ValueError(f"bad kind {self.kind!r}")
        if self.kind == FINITE and self.k < 0:
            raise ValueError("finite resilience must be nonnegative")

    @classmethod
    def finite(cls, k: int, certificate: Certificate = Certificate.EXACT):
        return cls(FINITE, int(k), None, certificate)

    @classmethod
    def omega(cls, uniform: bool | None = None, certificate: Certificate = Certificate.EXACT):
        return cls(OMEGA, 0, uniform, certificate)

    @classmethod
    def omega_plus_one(cls, certificate: Certificate = Certificate.EXACT):
        return cls(OMEGA_PLUS_ONE_KIND, 0, None, certificate)

    @property
    def is_finite(self) -> bool:
        return self.kind == FINITE

    def _rank(self):
        return {FINITE: (0, self.k), OMEGA: (1, 0), OMEGA_PLUS_ONE_KIND: (2, 0)}[self.kind]

    def __eq__(self, other):
        if not isinstance(other, ResilienceValue):
            return NotImplemented
        return self._rank() == other._rank()

    def __lt__(self, other):
        if not isinstance(other, ResilienceValue):
            return NotImplemented
        return self._rank() < other._rank()

    def __hash__(self):
        return hash(self._rank())

    def with_certificate(self, certificate: Certificate) -> "ResilienceValue":
        return ResilienceValue(self.kind, self.k, self.uniform, certificate)

    def __str__(self):
        if self.kind == FINITE:
            return str(self.k)
        if self.kind == OMEGA:
            return "omega?nonuniform" if self.uniform is False else "omega"
        return "omega+1"

    def __repr__(self):
        return f"ResilienceValue({self}!{self.certificate.value})"


Finite = ResilienceValue.finite
OMEGA_PLUS_ONE = ResilienceValue.omega_plus_one()


@dataclass(frozen=True)
class PositionalStrategy:
    """Memoryless strategy of ``player`` given as vertex -> successor (indices)."""

    player: int
    choice: Mapping[int, int] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "choice", MappingProxyType(dict(self.choice)))

    def __call__(self, v: int) -> int:
        try:
            return self.choice[v]
        except KeyError:
            raise StrategyUndefined(f"Player-{self.player} strategy undefined at vertex {v}") from None

    def __contains__(self, v):
        return v in self.choice

    def __len__(self):
        return len(self.choice)

    def check(self, arena: ExplicitArena) -> None:
        for v, u in self.choice.items():
            if arena.owner[v] != self.player:
                raise ValueError(f"strategy picks at foreign vertex {arena.labels[v]}")
            if u not in arena.succ[v]:
                raise ValueError(f"strategy move {arena.labels[v]} -> {arena.labels[u]} is not an edge")

    def move_at(self, arena: ExplicitArena, label) -> Hashable:
        """Successor label chosen at ``label``; errors outside the truncation."""
        v = arena.index.get(label)
        if v is None:
            h = getattr(label, "height", None)
            raise StrategyUndefined(
                f"strategy undefined at {label}: outside truncation of height {arena.height}"
                + (f" (stack height {h})" if h is not None else ""))
        return arena.labels[self(v)]


@dataclass(frozen=True)
class Play:
    """A finite play prefix as ``(vertex, disturbance_bit)`` pairs."""

    steps: tuple[tuple[int, int], ...]
    skipped: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple((int(v), int(b)) for v, b in self.steps))
        if self.steps and self.steps[0][1] != 0:
            raise ValueError("first disturbance bit must be 0")

    @property
    def vertices(self) -> list[int]:
        return [v for v, _ in self.steps]

    @property
    def disturbance_count(self) -> int:
        return sum(b for _, b in self.steps)

    def __len__(self):
        return len(self.steps)

    def check(self, arena: ExplicitArena) -> None:
        for (u, _), (v, b) in zip(self.steps, self.steps[1:]):
            edges = arena.dsucc[u] if b else arena.succ[u]
            if v not in edges:
                kind = "disturbance" if b else "standard"
                raise ValueError(f"{arena.labels[u]} -> {arena.labels[v]} is not a {kind} edge")

    def visits(self, vertices) -> bool:
        return any(v in vertices for v, _ in self.steps)


def simulate(arena: ExplicitArena, strategy0: PositionalStrategy | None,
             adversary: PositionalStrategy | None, schedule: Iterable[int], max_steps: int,
             seed: int = 0, start: int | None = None) -> Play:
    """Run one play for ``max_steps`` moves.

    A ``None`` strategy plays uniformly at random. ``schedule`` lists positions
    (indices of the new vertex) where a disturbance edge is taken; entries firing
    where no disturbance edge exists are skipped and reported in ``Play.skipped``.
    """
    rng = random.Random(seed)
    fire = set(schedule)
    v = arena.initial if start is None else start
    steps = [(v, 0)]
    skipped = []
    strategies = (strategy0, adversary)
    for pos in range(1, max_steps + 1):
        if pos in fire:
            if arena.dsucc[v]:
                v = rng.choice(arena.dsucc[v])
                steps.append((v, 1))
                continue
            skipped.append(pos)
        strat = strategies[arena.owner[v]]
        v = rng.choice(arena.succ[v]) if strat is None else strat(v)
        steps.append((v, 0))
    return Play(tuple(steps), tuple(skipped))


def consequential_disturbances(play: Play, strategy: PositionalStrategy,
                               arena: ExplicitArena) -> list[int]:
    """Positions of disturbances that changed the outcome of a Player-0 move."""
    out = []
    for j in range(1, len(play.steps)):
        u, _ = play.steps[j - 1]
        v, b = play.steps[j]
        if b and arena.owner[u] == 0 and v != strategy(u):
            out.append(j)
    return out

