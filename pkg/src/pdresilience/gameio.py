"""Line-oriented text format for games, strategies and resilience values.

::

    # comment
    game onecounter            # or: game pushdown; append 'reach' for reachability
    stack A
    state q_I owner=0 initial
    state q_2 owner=0 unsafe   # 'target' instead of 'unsafe' in reach games
    edge q_I _ -> q_I A        # w is 'eps', one symbol or two symbols (top first)
    dedge q_1 A -> q_1 eps     # disturbance; source must be owned by Player 0

A state may also carry ``dsim`` to mark it as a disturbance-simulation state
(used when rigged specs are written out).
"""

from __future__ import annotations

from .model import (
    BOTTOM, FRONTIER, Certificate, Config, ExplicitArena, PositionalStrategy, PushdownGameSpec,
    ResilienceValue, Rule, SpecError, parse_stack_word, stack_word,
)


class GameFormatError(ValueError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}" if line else message)
        self.line = line


_FLAGS = {"initial", "unsafe", "target", "dsim"}


def parse_game(data: bytes | str) -> PushdownGameSpec:
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise GameFormatError(0, f"not UTF-8 ({exc.reason} at byte {exc.start})") from None
    kind = objective = None
    stack: tuple[str, ...] | None = None
    stack_line = 0
    states: dict[str, dict] = {}
    initial = None
    edges: list[tuple[int, bool, Rule]] = []
    for no, raw in enumerate(data.splitlines(), 1):
        tok = raw.split("#", 1)[0].split()
        if not tok:
            continue
        head = tok[0]
        if kind is None:
            if head != "game" or len(tok) not in (2, 3) or tok[1] not in ("pushdown", "onecounter"):
                raise GameFormatError(no, "expected 'game pushdown' or 'game onecounter' first")
            if len(tok) == 3 and tok[2] != "reach":
                raise GameFormatError(no, f"unknown objective {tok[2]!r}")
            kind, objective = tok[1], ("reach" if len(tok) == 3 else "safety")
        elif head == "game":
            raise GameFormatError(no, "duplicate 'game' line")
        elif head == "stack":
            if stack is not None:
                raise GameFormatError(no, "duplicate 'stack' line")
            stack, stack_line = tuple(tok[1:]), no
            if not stack:
                raise GameFormatError(no, "empty stack alphabet")
            for x in stack:
                if x in (BOTTOM, "eps") or "." in x:
                    raise GameFormatError(no, f"illegal stack symbol {x!r}")
            if len(set(stack)) != len(stack):
                raise GameFormatError(no, "duplicate stack symbol")
        elif head == "state":
            if len(tok) < 3:
                raise GameFormatError(no, "expected 'state <name> owner=<0|1> [flags]'")
            name = tok[1]
            if name in states:
                raise GameFormatError(no, f"duplicate state {name!r}")
            if tok[2] not in ("owner=0", "owner=1"):
                raise GameFormatError(no, "expected owner=0 or owner=1")
            flags = set(tok[3:])
            if flags - _FLAGS or len(flags) != len(tok) - 3:
                raise GameFormatError(no, f"bad state flags {' '.join(tok[3:])!r}")
            bad_flag = "target" if objective == "safety" else "unsafe"
            if bad_flag in flags:
                raise GameFormatError(no, f"flag {bad_flag!r} not allowed in a {objective} game")
            if "initial" in flags:
                if initial is not None:
                    raise GameFormatError(no, f"duplicate initial state (first: {initial!r})")
                initial = name
            states[name] = {"owner": int(tok[2][-1]), "flags": flags, "line": no}
        elif head in ("edge", "dedge"):
            if len(tok) not in (6, 7) or tok[3] != "->":
                raise GameFormatError(no, f"expected '{head} <q> <top> -> <q'> <w>'")
            w = tok[5:]
            if w == ["eps"]:
                push = ()
            elif "eps" in w:
                raise GameFormatError(no, "'eps' cannot be combined with symbols")
            else:
                push = tuple(w)
            edges.append((no, head == "dedge", Rule(tok[1], tok[2], tok[4], push)))
        else:
            raise GameFormatError(no, f"unknown directive {head!r}")
    if kind is None:
        raise GameFormatError(0, "empty game file")
    if stack is None:
        raise GameFormatError(0, "missing 'stack' line")
    if kind == "onecounter" and len(stack) != 1:
        raise GameFormatError(stack_line, "a one-counter game has exactly one stack symbol")
    if not states:
        raise GameFormatError(0, "no states declared")
    if initial is None:
        raise GameFormatError(0, "no initial state")
    alphabet = set(stack)
    seen = set()
    for no, dist, r in edges:
        for q in (r.source, r.target):
            if q not in states:
                raise GameFormatError(no, f"undeclared state {q!r}")
        if r.top != BOTTOM and r.top not in alphabet:
            raise GameFormatError(no, f"unknown stack symbol {r.top!r}")
        if BOTTOM in r.push:
            raise GameFormatError(no, "rules cannot write or delete the bottom '_'")
        for x in r.push:
            if x not in alphabet:
                raise GameFormatError(no, f"unknown stack symbol {x!r}")
        limit = 1 if r.top == BOTTOM else 2
        if len(r.push) > limit:
            raise GameFormatError(no, f"at most {limit} symbol(s) may be written here")
        if dist and states[r.source]["owner"] != 0:
            raise GameFormatError(no, f"dedge from Player-1 state {r.source!r}")
        if not dist:
            seen.add((r.source, r.top))
    for name, info in states.items():
        for x in (*stack, BOTTOM):
            if (name, x) not in seen:
                raise GameFormatError(info["line"], f"deadlock: state {name!r} has no edge for top {x!r}")
    bad = {q for q, i in states.items() if i["flags"] & {"unsafe", "target"}}
    try:
        return PushdownGameSpec(
            states=tuple(states), owner={q: i["owner"] for q, i in states.items()},
            initial_state=initial, stack_alphabet=stack,
            transitions=[r for _, d, r in edges if not d],
            disturbance_transitions=[r for _, d, r in edges if d], unsafe_states=bad,
            dist_states={q for q, i in states.items() if "dsim" in i["flags"]},
            objective=objective)
    except SpecError as exc:
        raise GameFormatError(0, str(exc)) from None


def serialize_game(spec: PushdownGameSpec) -> str:
    kind = "onecounter" if spec.is_one_counter else "pushdown"
    lines = [f"game {kind}" + (" reach" if spec.objective == "reach" else ""),
             "stack " + " ".join(spec.stack_alphabet)]
    bad_flag = "target" if spec.objective == "reach" else "unsafe"
    for q in spec.states:
        flags = [f for f, on in (("initial", q == spec.initial_state),
                                 (bad_flag, q in spec.unsafe_states),
                                 ("dsim", q in spec.dist_states)) if on]
        lines.append(" ".join(["state", q, f"owner={spec.owner[q]}", *flags]))
    lines += [f"edge {r}" for r in spec.transitions]
    lines += [f"dedge {r}" for r in spec.disturbance_transitions]
    return "\n".join(lines) + "\n"


def format_value(value: ResilienceValue) -> str:
    return f"{value}!{value.certificate.value}"


def parse_value(text: str) -> ResilienceValue:
    body, _, cert = text.strip().partition("!")
    certificate = Certificate(cert) if cert else Certificate.EXACT
    if body == "omega+1":
        return ResilienceValue.omega_plus_one(certificate)
    if body == "omega":
        return ResilienceValue.omega(None, certificate)
    if body == "omega?nonuniform":
        return ResilienceValue.omega(False, certificate)
    if body.isdigit():
        return ResilienceValue.finite(int(body), certificate)
    raise ValueError(f"not a resilience value: {text!r}")


def _label_text(label) -> str:
    return "<frontier>" if label == FRONTIER else f"{label.state} {stack_word(label.stack)}"


def format_strategy(strategy: PositionalStrategy, arena: ExplicitArena) -> str:
    lines = [f"# Player-{strategy.player} positional strategy, stack height <= {arena.height}"]
    for v in sorted(strategy.choice):
        lines.append(f"{_label_text(arena.labels[v])} -> {_label_text(arena.labels[strategy(v)])}")
    return "\n".join(lines) + "\n"


def parse_strategy(text: str) -> dict:
    """``{Config: Config | FRONTIER}`` from the strategy listing format."""
    out = {}
    for no, raw in enumerate(text.splitlines(), 1):
        tok = raw.split("#", 1)[0].split()
        if not tok:
            continue
        try:
            if len(tok) == 5 and tok[2] == "->":
                tgt = Config(tok[3], parse_stack_word(tok[4]))
            elif len(tok) == 4 and tok[2] == "->" and tok[3] == "<frontier>":
                tgt = FRONTIER
            else:
                raise ValueError("expected '<state> <stack> -> <state> <stack>'")
            out[Config(tok[0], parse_stack_word(tok[1]))] = tgt
        except ValueError as exc:
            raise GameFormatError(no, str(exc)) from None
    return out
