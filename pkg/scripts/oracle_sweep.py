#!/usr/bin/env python3
"""Cross-check the fixpoint against the brute-force oracle on random specs.

Prints a histogram of initial values and any vertex where the two disagree.
"""

import argparse
from collections import Counter

from pdresilience import brute_force_resilience, expand_truncated, gen_random, resilience_fixpoint


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seeds", type=int, default=500)
    ap.add_argument("--states", type=int, default=4)
    ap.add_argument("--height", type=int, default=8)
    ap.add_argument("--budget", type=int, default=6)
    ap.add_argument("--pushdown", action="store_true")
    args = ap.parse_args()

    hist, bad, vertices = Counter(), 0, 0
    for seed in range(args.seeds):
        spec = gen_random(seed, 1 + seed % args.states, one_counter=not args.pushdown,
                          disturbance_rate=1.0)
        arena = expand_truncated(spec, args.height)
        table = resilience_fixpoint(arena)
        brute = brute_force_resilience(arena, args.budget)
        vertices += arena.n
        hist[str(table[arena.initial])] += 1
        for v in range(arena.n):
            want = brute[v]
            if want is None:
                ok = table[v].is_finite and table[v].k > args.budget
            else:
                ok = table[v] == want
            if not ok:
                bad += 1
                print(f"seed {seed}: {arena.labels[v]} fixpoint {table[v]} brute {want}")
    print(f"{args.seeds} specs, {vertices} vertices, {bad} mismatches")
    for value, n in sorted(hist.items(), key=lambda kv: -kv[1]):
        print(f"  r(v_I) = {value:<8} {n}")


if __name__ == "__main__":
    main()
