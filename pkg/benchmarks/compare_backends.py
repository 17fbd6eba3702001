#!/usr/bin/env python3
"""Compare the compiled and pure-Python backends on grid peeling runs.

Both paths must report identical tau (they share no arithmetic); the table
shows wall time per backend and the speedup of the compiled kernels.
"""

import argparse
import time

from gridpeel import PeelOptions, have_compiled, tau_grid


def _ints(s):
    return [int(x) for x in s.split(",") if x]


def time_run(n, d, backend):
    t0 = time.perf_counter()
    tau = tau_grid(n, d, PeelOptions(backend=backend))
    return tau, time.perf_counter() - t0


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--d2", type=_ints, default=[256, 512],
                    help="comma-separated n values for d=2 (default 256,512)")
    ap.add_argument("--d3", type=_ints, default=[12, 16, 24],
                    help="comma-separated n values for d=3 (default 12,16,24)")
    args = ap.parse_args()

    if not have_compiled():
        print("compiled backend not built; nothing to compare")
        return

    rows = []
    for d, ns in ((2, args.d2), (3, args.d3)):
        for n in ns:
            tau_c, tc = time_run(n, d, "c")
            tau_p, tp = time_run(n, d, "python")
            if tau_c != tau_p:
                raise SystemExit(f"backend disagreement at n={n} d={d}: "
                                 f"{tau_c} vs {tau_p}")
            rows.append((d, n, tau_c, tc, tp))

    print(f"{'d':>2} {'n':>5} {'tau':>6} {'c [s]':>9} {'python [s]':>11} {'speedup':>8}")
    for d, n, tau, tc, tp in rows:
        print(f"{d:>2} {n:>5} {tau:>6} {tc:>9.3f} {tp:>11.3f} "
              f"{tp / tc:>7.1f}x")


if __name__ == "__main__":
    main()
