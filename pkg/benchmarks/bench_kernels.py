"""Compare the numba kernels with their numpy fallbacks.

Run: python3 benchmarks/bench_kernels.py [--repeat N]
Prints one line per kernel and size: best wall time of each path, the
speedup, and whether the outputs agree.  The first jit call (compilation or
cache load) is timed separately and excluded from the best time.
"""
import argparse
import time

import numpy as np

from canonlab import _kernels as K
from canonlab.corpus import all_cubic_graphs, graph_curve, random_stable

P = 1048583


def _best(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def _same(a, b):
    if isinstance(a, tuple):
        return all(np.array_equal(x, y) for x, y in zip(a, b))
    return np.array_equal(a, b) if isinstance(a, np.ndarray) else a == b


def bench(name, jit_fn, np_fn, repeat):
    t = time.perf_counter()
    jit_fn()
    warm = time.perf_counter() - t
    tj, oj = _best(jit_fn, repeat)
    tn, on = _best(np_fn, repeat)
    print(f"{name:<32} numpy {tn * 1e3:9.3f} ms   jit {tj * 1e3:9.3f} ms   "
          f"speedup {tn / tj:7.1f}x   first-call {warm * 1e3:8.1f} ms   agree={_same(oj, on)}")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    rng = np.random.default_rng(0)

    curves = [graph_curve(G) for G in all_cubic_graphs(8)][-1:]
    curves += [random_stable(c, 2 * c + 2, seed=1) for c in (10, 14)]
    for c in curves:
        a, b = c.node_ends
        n = len(c.components)
        bench(f"cut_sizes c={n}", lambda: K.cut_sizes_jit(a, b, n),
              lambda: K.cut_sizes_numpy(a, b, n), args.repeat)
        bench(f"subset_stats c={n}", lambda: K.subset_stats_jit(a, b, n),
              lambda: K.subset_stats_numpy(a, b, n), args.repeat)

    for rows, cols in ((40, 30), (120, 80), (400, 160)):
        r = min(rows, cols) // 2
        left = rng.integers(0, 50, (rows, r))
        right = rng.integers(0, 50, (r, cols))
        mat = (left @ right) % P
        bench(f"rank_modp {rows}x{cols} (rank {r})", lambda: K.rank_modp_jit(mat, P),
              lambda: K.rank_modp_numpy(mat, P), args.repeat)


if __name__ == "__main__":
    main()
