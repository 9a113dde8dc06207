"""Command-line interface.

Exit codes: 0 computed, 2 input error, 3 no certified answer within the caps.
"""

from __future__ import annotations

import argparse
import random
import sys
from pathlib import Path

from . import engine, generators, onecounter, reach
from .gameio import (
    GameFormatError, format_strategy, format_value, parse_game, parse_strategy, serialize_game,
)
from .model import (
    FRONTIER, OPTIMISTIC, Config, PositionalStrategy, SpecError, StrategyUndefined,
    expand_truncated, f_sink_normalize, is_f_sink_normal, simulate, stack_word,
)

EXIT_OK, EXIT_INPUT, EXIT_UNKNOWN = 0, 2, 3


class InputError(Exception):
    pass


def _load(path: str):
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    try:
        return parse_game(data)
    except GameFormatError as exc:
        raise InputError(f"{path}: {exc}") from None


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _unknown(exc: engine.ResilienceUnknown) -> int:
    cand = f" (candidate {exc.candidate})" if exc.candidate is not None else ""
    print(f"unknown: {exc}{cand}")
    return EXIT_UNKNOWN


def cmd_resilience(args) -> int:
    spec = _load(args.file)
    if spec.objective != "safety":
        raise InputError("resilience needs a safety game (use reach-optimal for reach games)")
    bounds = engine.compute_bounds(spec)
    try:
        value = engine.resilience_initial(spec, args.height_cap, args.k_cap, args.search)
    except engine.ResilienceUnknown as exc:
        code = _unknown(exc)
        print(bounds.describe())
        return code
    print(format_value(value))
    print(bounds.describe())
    return EXIT_OK


def cmd_check(args) -> int:
    spec = _load(args.file)
    alpha = args.alpha
    if alpha in ("omega+1", "omega"):  # no omega in safety games, so both mean omega+1
        res = engine.check_omega_plus_one(spec, args.height_cap or engine.default_height_cap(spec))
        answer, cert = res.holds, res.certificate
    elif alpha.isdigit():
        answer, cert = engine.check_at_least(spec, int(alpha), args.height_cap)
    else:
        raise InputError(f"--alpha must be omega+1, omega or a nonnegative integer, not {alpha!r}")
    if cert is None:
        print("unknown: Player 0 wins the truncation but it did not stabilize")
        return EXIT_UNKNOWN
    print(f"{'yes' if answer else 'no'}!{cert.value}")
    return EXIT_OK


def cmd_strategy(args) -> int:
    spec = _load(args.file)
    arena = expand_truncated(spec, args.height, OPTIMISTIC)
    table = engine.resilience_fixpoint(arena)
    strategy = engine.extract_optimal_strategy(arena, table)
    _emit(format_strategy(strategy, arena), args.out)
    print(f"# resilience of {spec.initial_config} at height <= {args.height}: "
          f"{table[arena.initial]}", file=sys.stderr)
    return EXIT_OK


def cmd_strategy_graph(args) -> int:
    spec = _load(args.file)
    if not spec.is_one_counter:
        raise InputError("strategy graphs need a one-counter game")
    if not is_f_sink_normal(spec):
        spec = f_sink_normalize(spec)
    if args.verify:
        try:
            graph = onecounter.StrategyGraph.from_text(Path(args.verify).read_text(encoding="utf-8"))
        except (OSError, ValueError) as exc:
            raise InputError(f"{args.verify}: {exc}") from None
        problems = onecounter.verify_strategy_graph(graph, spec, args.k)
        for p in problems:
            print(p)
        print("valid" if not problems else f"invalid: {len(problems)} violation(s)")
        return EXIT_OK if not problems else EXIT_INPUT
    res = onecounter.strategy_graph_exists(spec, args.k, args.height_cap)
    print(f"{'exists' if res.exists else 'none'}!{res.certificate.value}")
    if res.graph is not None:
        _emit(res.graph.to_text(), args.out)
    return EXIT_OK


def cmd_reach_optimal(args) -> int:
    spec = _load(args.file)
    if spec.objective != "reach":
        raise InputError("reach-optimal needs a reach game ('game ... reach')")
    try:
        value = reach.optimal_reach_value(spec, args.height_cap)
    except engine.ResilienceUnknown as exc:
        return _unknown(exc)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    print(format_value(value))
    return EXIT_OK


def cmd_generate(args) -> int:
    fam, params = args.family, args.params

    def ints(n):
        if len(params) != n or not all(p.isdigit() for p in params):
            raise InputError(f"generate {fam} expects {n} integer argument(s)")
        return [int(p) for p in params]

    if fam == "fig1":
        ints(0)
        spec = generators.gen_fig1()
    elif fam == "fig3":
        ints(0)
        spec = generators.gen_fig3()
    elif fam == "primorial-ocs":
        spec = generators.gen_primorial_ocs(max(1, *ints(1)))
    elif fam == "binary-pds":
        spec = generators.gen_binary_pds(max(1, *ints(1)))
    elif fam == "random":
        seed, n = ints(2)
        spec = generators.gen_random(seed, max(1, n), one_counter=not args.pushdown)
    else:
        raise InputError(f"unknown family {fam!r}")
    _emit(serialize_game(spec), args.out)
    return EXIT_OK


def cmd_simulate(args) -> int:
    spec = _load(args.game)
    try:
        listing = parse_strategy(Path(args.strategy).read_text(encoding="utf-8"))
    except (OSError, GameFormatError) as exc:
        raise InputError(f"{args.strategy}: {exc}") from None
    height = max((c.height for c in listing), default=0)
    arena = expand_truncated(spec, height, OPTIMISTIC)
    choice = {}
    for src, dst in listing.items():
        if src in arena.index and dst in arena.index and arena.owner[arena.index[src]] == 0:
            choice[arena.index[src]] = arena.index[dst]
    sigma = PositionalStrategy(0, choice)
    sigma.check(arena)
    rng = random.Random(args.seed)
    wins = losses = undefined = 0
    front = arena.index[FRONTIER]
    for _ in range(args.runs):
        schedule = rng.sample(range(1, args.steps + 1), min(args.disturbances, args.steps))
        try:
            play = simulate(arena, sigma, None, schedule, args.steps, rng.randrange(2 ** 32))
        except StrategyUndefined:
            undefined += 1
            continue
        if play.visits(arena.unsafe):
            losses += 1
        elif front in play.vertices:
            undefined += 1
        else:
            wins += 1
    print(f"wins {wins} losses {losses} undefined {undefined}")
    return EXIT_OK


def cmd_oracle(args) -> int:
    spec = _load(args.file)
    arena = expand_truncated(spec, args.truncate, OPTIMISTIC)
    table = engine.brute_force_resilience(arena, args.budget)
    for v, lab in enumerate(arena.labels):
        if isinstance(lab, Config):
            val = table[v]
            print(f"{lab.state} {stack_word(lab.stack)} {val if val is not None else f'>{args.budget}'}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pdresilience", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("resilience", help="resilience of the initial configuration")
    s.add_argument("file")
    s.add_argument("--height-cap", type=int, default=None)
    s.add_argument("--k-cap", type=int, default=engine.DEFAULT_K_CAP)
    s.add_argument("--search", choices=("seeded", "gallop", "linear"), default="seeded")
    s.set_defaults(func=cmd_resilience)

    s = sub.add_parser("check", help="is the initial resilience at least ALPHA?")
    s.add_argument("file")
    s.add_argument("--alpha", required=True)
    s.add_argument("--height-cap", type=int, default=None)
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("strategy", help="optimally resilient strategy on a truncation")
    s.add_argument("file")
    s.add_argument("--height", type=int, required=True)
    s.add_argument("--out")
    s.set_defaults(func=cmd_strategy)

    s = sub.add_parser("strategy-graph", help="Player-1 certificate for budget K (one-counter)")
    s.add_argument("file")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--verify")
    s.add_argument("--height-cap", type=int, default=onecounter.DEFAULT_GRAPH_HEIGHT)
    s.add_argument("--out")
    s.set_defaults(func=cmd_strategy_graph)

    s = sub.add_parser("reach-optimal", help="value of an optimal reaching strategy")
    s.add_argument("file")
    s.add_argument("--height-cap", type=int, default=None)
    s.set_defaults(func=cmd_reach_optimal)

    s = sub.add_parser("generate", help="write a fixture game")
    s.add_argument("family", help="fig1 | fig3 | primorial-ocs K | binary-pds K | random SEED N")
    s.add_argument("params", nargs="*")
    s.add_argument("--pushdown", action="store_true", help="random: two stack symbols")
    s.add_argument("--out")
    s.set_defaults(func=cmd_generate)

    s = sub.add_parser("simulate", help="play a strategy file against random opponents")
    s.add_argument("game")
    s.add_argument("strategy")
    s.add_argument("--disturbances", type=int, default=0)
    s.add_argument("--runs", type=int, default=100)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--steps", type=int, default=200)
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("oracle", help="brute-force resilience table on a truncation")
    s.add_argument("file")
    s.add_argument("--truncate", type=int, required=True)
    s.add_argument("--budget", type=int, required=True)
    s.set_defaults(func=cmd_oracle)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    for name in ("height", "truncate", "budget", "k", "k_cap", "disturbances", "runs", "steps",
                 "height_cap"):
        val = getattr(args, name, None)
        if isinstance(val, int) and val < (1 if name in ("k", "k_cap") else 0):
            print(f"error: --{name.replace('_', '-')} out of range", file=sys.stderr)
            return EXIT_INPUT
    try:
        return args.func(args)
    except (InputError, SpecError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
