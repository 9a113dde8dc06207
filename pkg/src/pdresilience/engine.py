"""Resilience computations: the D-boundary fixpoint, optimal strategies, the
omega+1 check and the search over disturbance budgets for pushdown specs.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Iterable, NamedTuple

from .model import (
    OMEGA_PLUS_ONE, OPTIMISTIC, PESSIMISTIC, Certificate, Config, ExplicitArena, Finite,
    PositionalStrategy, PushdownGameSpec, ResilienceValue, expand_truncated,
)
from .rigging import counter_product, lift_strategy_down, rig_arena, rig_pds
from .solve import initial_safe, solve_safety

DEFAULT_K_CAP = 2 ** 16
DEFAULT_OCS_HEIGHT = 256
DEFAULT_PDS_HEIGHT_BITS = 8
EXACT_B_BITS = 1 << 20
SMALL_H = 4096


class ResilienceUnknown(RuntimeError):
    """No certified answer within the caps; ``candidate`` is the best uncertified guess."""

    def __init__(self, reason: str, candidate: ResilienceValue | None = None):
        super().__init__(reason)
        self.candidate = candidate


def d_boundary(arena: ExplicitArena, X: Iterable[int]) -> frozenset[int]:
    xs = set(X)
    return frozenset(p for u in xs for p in arena.dpred[u] if p not in xs)


@dataclass(frozen=True)
class ResilienceTable:
    """Per-vertex resilience with the fixpoint layers; ``layer_of[v] == -1`` means omega+1."""

    layer_of: tuple[int, ...]
    num_layers: int

    def __getitem__(self, v: int) -> ResilienceValue:
        j = self.layer_of[v]
        return OMEGA_PLUS_ONE if j < 0 else Finite(j)

    def __len__(self):
        return len(self.layer_of)

    @property
    def values(self) -> list[ResilienceValue]:
        return [self[v] for v in range(len(self.layer_of))]

    def layer(self, j: int) -> frozenset[int]:
        return frozenset(v for v, l in enumerate(self.layer_of) if 0 <= l <= j)

    @property
    def layers(self) -> list[frozenset[int]]:
        return [self.layer(j) for j in range(self.num_layers)]


def resilience_fixpoint(arena: ExplicitArena) -> ResilienceTable:
    """S_0 = Attr_1(F), S_{j+1} = Attr_1(S_j + boundary(S_j)); r(v) = first layer.

    Computed incrementally: attractor counters persist across layers since the
    layers only grow.
    """
    n = arena.n
    owner, pred, dpred = arena.owner, arena.pred, arena.dpred
    count = [len(s) for s in arena.succ]
    layer_of = [-1] * n
    targets = sorted(arena.unsafe)
    j = 0
    while True:
        queue = deque()
        for t in targets:
            if layer_of[t] < 0:
                layer_of[t] = j
                queue.append(t)
        added = []
        while queue:
            u = queue.popleft()
            added.append(u)
            for p in pred[u]:
                if layer_of[p] >= 0:
                    continue
                if owner[p] == 1:
                    layer_of[p] = j
                    queue.append(p)
                else:
                    count[p] -= 1
                    if count[p] == 0:
                        layer_of[p] = j
                        queue.append(p)
        # D-predecessors of older layers are already inside
        boundary = {p for u in added for p in dpred[u] if layer_of[p] < 0}
        if not boundary:
            return ResilienceTable(tuple(layer_of), j + 1)
        targets = sorted(boundary)
        j += 1


def extract_optimal_strategy(arena: ExplicitArena, table: ResilienceTable) -> PositionalStrategy:
    """Trap strategy of layer r(v)-1 at each Player-0 vertex; lowest index wins ties."""
    lay = table.layer_of
    choice = {}
    for v in range(arena.n):
        if arena.owner[v] != 0:
            continue
        r = lay[v]
        if r == 0:
            choice[v] = arena.succ[v][0]
            continue
        for u in arena.succ[v]:
            if lay[u] < 0 or (r > 0 and lay[u] >= r):
                choice[v] = u
                break
        else:
            raise AssertionError(f"no layer-respecting move at {arena.labels[v]}")
    return PositionalStrategy(0, choice)


def strategy_resilience(arena: ExplicitArena, strategy: PositionalStrategy,
                        start: int | None = None) -> ResilienceValue:
    """Fewest disturbances with which some play consistent with ``strategy`` hits F.

    0-1 shortest path: Player-0 moves along the strategy cost 0, disturbances 1,
    Player-1 moves 0. Unreachable F gives omega+1.
    """
    s = arena.initial if start is None else start
    dist = {s: 0}
    dq = deque([(0, s)])
    while dq:
        d, v = dq.popleft()
        if d > dist[v]:
            continue
        if v in arena.unsafe:
            return Finite(d)
        outs = [(strategy(v), 0)] if arena.owner[v] == 0 else [(u, 0) for u in arena.succ[v]]
        outs += [(u, 1) for u in arena.dsucc[v]]
        for u, c in outs:
            if dist.get(u, math.inf) > d + c:
                dist[u] = d + c
                (dq.appendleft if c == 0 else dq.append)((d + c, u))
    return OMEGA_PLUS_ONE


def brute_force_resilience(arena: ExplicitArena, budget_cap: int) -> dict[int, ResilienceValue | None]:
    """Naive greatest-fixpoint survival sets per disturbance budget.

    W_d: Player 0 avoids F while Player 1 may fire disturbance edges d times.
    value(v) = least d with v outside W_d, omega+1 if v survives unboundedly many,
    ``None`` if it survives ``budget_cap`` but not unboundedly many.
    """
    verts = range(arena.n)

    def survive(prev_fn):
        X = {v for v in verts if v not in arena.unsafe}
        changed = True
        while changed:
            changed = False
            for v in sorted(X):
                if arena.owner[v] == 0:
                    ok = any(u in X for u in arena.succ[v]) and all(
                        prev_fn(X, u) for u in arena.dsucc[v])
                else:
                    ok = all(u in X for u in arena.succ[v])
                if not ok:
                    X.discard(v)
                    changed = True
        return X

    w_inf = survive(lambda X, u: u in X)
    levels = [survive(lambda X, u: True)]
    for _ in range(budget_cap):
        prev = levels[-1]
        levels.append(survive(lambda X, u, prev=prev: u in prev))
    out: dict[int, ResilienceValue | None] = {}
    for v in verts:
        if v in w_inf:
            out[v] = OMEGA_PLUS_ONE
            continue
        out[v] = None
        for d, W in enumerate(levels):
            if v not in W:
                out[v] = Finite(d)
                break
    return out


class Bounds(NamedTuple):
    q_rig: int
    gamma: int
    h: int
    b: int | None
    b_log2: float

    def describe(self) -> str:
        def fmt(x):
            return str(x) if x.bit_length() <= 64 else f"~2^{x.bit_length() - 1}"
        if self.b is not None:
            b = fmt(self.b)
        elif math.isfinite(self.b_log2):
            b = f"~2^{int(self.b_log2)}"
        else:
            b = f"~2^(2^{self.h.bit_length() - 1})"
        return f"h(P): {fmt(self.h)}, b(P): {b}"


def compute_bounds(spec: PushdownGameSpec) -> Bounds:
    """Stack-height bound h and resilience bound b from the rigged state count.

    ``b`` is left ``None`` (only its log2 is kept) when it would need more than
    ``EXACT_B_BITS`` bits.
    """
    q = len(rig_pds(spec).states)
    g = len(spec.stack_alphabet)
    h = q * g * 2 ** (q + 1) + 1
    try:
        b_log2 = math.log2(q) + math.log2(h) + h * math.log2(g)
    except OverflowError:
        b_log2 = math.inf
    b = q * h * g ** h if b_log2 <= EXACT_B_BITS else None
    return Bounds(q, g, h, b, b_log2)


def default_height_cap(spec: PushdownGameSpec) -> int:
    """256 for one-counter specs (h itself when h <= 4096), 8 bits of stack otherwise."""
    if spec.is_one_counter:
        h = compute_bounds(spec).h
        return h if h <= SMALL_H else DEFAULT_OCS_HEIGHT
    return max(1, int(DEFAULT_PDS_HEIGHT_BITS / math.log2(len(spec.stack_alphabet))))


class OmegaCheck(NamedTuple):
    holds: bool
    certificate: Certificate | None
    strategy: PositionalStrategy | None
    arena: ExplicitArena
    height: int


def _safe_low_region(game: PushdownGameSpec, T: int, limit: int):
    """(low configurations present, low configurations won by Player 0)."""
    arena = expand_truncated(game, T, OPTIMISTIC)
    sol = solve_safety(arena)
    low = {v for v, c in enumerate(arena.labels) if isinstance(c, Config) and c.height <= limit}
    return (frozenset(arena.labels[v] for v in low),
            frozenset(arena.labels[v] for v in low if v in sol.w0))


def stabilization_step(q_rig: int, T: int) -> int:
    return max(1, min(q_rig, T // 3))


def is_stable(game: PushdownGameSpec, T: int, q_rig: int) -> bool:
    """Player 0's region below T-3D is the same at T, T-D, T-2D and T-3D."""
    delta = stabilization_step(q_rig, T)
    low = T - 3 * delta
    if low < 0:
        return False
    regions = [_safe_low_region(game, T - i * delta, low) for i in range(4)]
    common = frozenset.intersection(*(present for present, _ in regions))
    return len({won & common for _, won in regions}) == 1


def check_omega_plus_one(spec: PushdownGameSpec, height_cap: int | None = None) -> OmegaCheck:
    """Does Player 0 win the rigged safety game, i.e. is r(v_I) = omega+1?

    A Player-1 win on a truncation is sound. A Player-0 win is exact at T >= h or
    when Player 0 also wins with a losing frontier; otherwise it is heuristic if
    the low part of the Player-0 winning region is identical for T, T-D, T-2D, T-3D, and
    uncertified (``certificate is None``) if not.
    """
    bounds = compute_bounds(spec)
    T = bounds.h if height_cap is None else min(bounds.h, height_cap)
    arena = expand_truncated(spec, T, OPTIMISTIC)
    rigged = rig_arena(arena)
    sol = solve_safety(rigged)
    if arena.initial not in sol.w0:
        return OmegaCheck(False, Certificate.EXACT, None, arena, T)
    strategy = lift_strategy_down(sol.strategy0, rigged, arena)
    if T >= bounds.h:
        cert = Certificate.EXACT
    elif initial_safe(rig_arena(expand_truncated(spec, T, PESSIMISTIC))):
        cert = Certificate.EXACT
    else:
        cert = Certificate.HEURISTIC if is_stable(rig_pds(spec), T, bounds.q_rig) else None
    return OmegaCheck(True, cert, strategy, arena, T)


def player1_wins_budget(rigged: PushdownGameSpec, k: int, T: int, mode: str = OPTIMISTIC) -> bool:
    return not initial_safe(expand_truncated(counter_product(rigged, k), T, mode))


def resilience_initial(spec: PushdownGameSpec, height_cap: int | None = None,
                       k_cap: int = DEFAULT_K_CAP, search: str = "seeded") -> ResilienceValue:
    """Resilience of the initial configuration (budget search over rigged products).

    ``search``: ``"linear"`` tries k = 1, 2, ... in order; ``"gallop"`` doubles k and
    bisects; ``"seeded"`` starts from the fixpoint value of the truncated arena and
    brackets from there. All three return the least k where Player 1 wins, minus one.
    Raises :class:`ResilienceUnknown` when no certified answer exists within caps.
    """
    if spec.objective != "safety":
        raise ValueError("resilience is defined for safety specs")
    if height_cap is None:
        height_cap = default_height_cap(spec)
    omega = check_omega_plus_one(spec, height_cap)
    if omega.holds:
        if omega.certificate is None:
            raise ResilienceUnknown("Player 0 wins the truncation but the result did not "
                                    "stabilize", OMEGA_PLUS_ONE.with_certificate(Certificate.HEURISTIC))
        return OMEGA_PLUS_ONE.with_certificate(omega.certificate)

    bounds = compute_bounds(spec)
    T = omega.height
    rigged = rig_pds(spec)
    limit = k_cap if bounds.b is None else min(bounds.b, k_cap)
    memo: dict[int, bool] = {}

    def wins(k):
        if k not in memo:
            memo[k] = player1_wins_budget(rigged, k, T)
        return memo[k]

    k = _search(wins, limit, search, lambda: _seed(omega.arena))
    if k is None:
        raise ResilienceUnknown(f"Player 1 wins no budget up to k = {limit}")
    r = k - 1
    if r == 0 or T >= bounds.h or not player1_wins_budget(rigged, r, T, PESSIMISTIC):
        return Finite(r, Certificate.EXACT)
    return Finite(r, Certificate.SOUND_LOWER_BOUND)


def _seed(arena: ExplicitArena) -> int | None:
    j = resilience_fixpoint(arena).layer_of[arena.initial]
    return None if j < 0 else j


def _search(wins, limit: int, mode: str, seed_fn) -> int | None:
    """Least k in 1..limit with wins(k), assuming monotonicity; None if none."""
    if limit < 1:
        return None
    if mode == "linear":
        for k in range(1, limit + 1):
            if wins(k):
                return k
        return None
    if mode not in ("gallop", "seeded"):
        raise ValueError(f"unknown search mode {mode!r}")
    lo, hi = 0, None  # wins(lo) false (lo = 0 by convention), wins(hi) true
    probe = 1
    if mode == "seeded":
        s = seed_fn()
        if s is not None:
            probe = min(s + 1, limit)
            if wins(probe):
                hi = probe
                if probe > 1 and not wins(probe - 1):
                    return probe
                if probe > 1:
                    hi = probe - 1
            else:
                lo = probe
                probe = min(2 * probe, limit)
    while hi is None:
        if wins(probe):
            hi = probe
        elif probe >= limit:
            return None
        else:
            lo, probe = probe, min(2 * probe, limit)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if wins(mid):
            hi = mid
        else:
            lo = mid
    return hi


def check_at_least(spec: PushdownGameSpec, k: int, height_cap: int | None = None):
    """Is r(v_I) >= k?  Returns (answer, certificate or None when uncertified)."""
    if k <= 0:
        return True, Certificate.EXACT
    if height_cap is None:
        height_cap = default_height_cap(spec)
    bounds = compute_bounds(spec)
    T = min(bounds.h, height_cap)
    rigged = rig_pds(spec)
    if player1_wins_budget(rigged, k, T):
        return False, Certificate.EXACT
    if T >= bounds.h or not player1_wins_budget(rigged, k, T, PESSIMISTIC):
        return True, Certificate.EXACT
    stable = is_stable(counter_product(rigged, k), T, bounds.q_rig)
    return True, (Certificate.HEURISTIC if stable else None)
