#!/usr/bin/env python3
"""Resilience and wall time for the primorial and binary-counter families.

The one-counter family should give k# (2, 6, 30, ...) and the pushdown family
2^(k#) - 1 (3, 63, ...).
"""

import argparse
import time

from pdresilience import (
    ResilienceUnknown, compute_bounds, gen_binary_pds, gen_primorial_ocs, primorial,
    resilience_initial,
)
from pdresilience.gameio import format_value


def run(name, spec, expected, height_cap):
    start = time.perf_counter()
    try:
        got = format_value(resilience_initial(spec, height_cap))
    except ResilienceUnknown as exc:
        got = f"unknown ({exc})"
    took = time.perf_counter() - start
    bounds = compute_bounds(spec)
    print(f"{name:<14} expected {expected:<8} got {got:<16} {took:7.1f}s  "
          f"|Q'|={bounds.q_rig}  {bounds.describe()}")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-ocs", type=int, default=3, help="largest k for the one-counter family")
    ap.add_argument("--max-pds", type=int, default=2, help="largest k for the pushdown family")
    ap.add_argument("--height-cap", type=int, default=None)
    args = ap.parse_args()

    for k in range(1, args.max_ocs + 1):
        run(f"primorial k={k}", gen_primorial_ocs(k), primorial(k), args.height_cap)
    for k in range(1, args.max_pds + 1):
        run(f"binary k={k}", gen_binary_pds(k), 2 ** primorial(k) - 1, args.height_cap)


if __name__ == "__main__":
    main()
