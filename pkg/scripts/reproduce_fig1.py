#!/usr/bin/env python3
"""Print the resilience table of the three-state one-counter example.

Shows each configuration of the truncation with its fixpoint value, the brute-force
value, and the move of the optimally resilient strategy.
"""

import argparse

from pdresilience import (
    Config, brute_force_resilience, expand_truncated, extract_optimal_strategy, gen_fig1,
    resilience_fixpoint, resilience_initial,
)
from pdresilience.gameio import format_value
from pdresilience.model import stack_word


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--height", type=int, default=8)
    args = ap.parse_args()

    spec = gen_fig1()
    arena = expand_truncated(spec, args.height)
    table = resilience_fixpoint(arena)
    brute = brute_force_resilience(arena, args.height + 1)
    sigma = extract_optimal_strategy(arena, table)

    print(f"initial configuration: {format_value(resilience_initial(spec))}")
    print(f"{'config':<22}{'fixpoint':>10}{'brute':>10}   move")
    rows = sorted((c.state, c.height, v) for v, c in enumerate(arena.labels) if isinstance(c, Config))
    for state, _, v in rows:
        c = arena.labels[v]
        move = ""
        if v in sigma:
            m = arena.labels[sigma(v)]
            move = f"-> {m.state} {stack_word(m.stack)}" if isinstance(m, Config) else f"-> {m}"
        print(f"{state + ' ' + stack_word(c.stack):<22}{str(table[v]):>10}{str(brute[v]):>10}   {move}")


if __name__ == "__main__":
    main()
