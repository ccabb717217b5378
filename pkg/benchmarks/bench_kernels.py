#!/usr/bin/env python3
"""Benchmark: compiled kernel-assembly core vs the numpy fallback.

Assembly of the weighted kernel matrices is the hot loop of the Laplace-node
sweep (one N x N complex fill per inversion node), so both backends are timed
on realistic batches and the LU solve is shown alongside for context.

Usage: python benchmarks/bench_kernels.py [--nodes 64] [--repeat 5]
"""

import argparse
import time

import numpy as np

from nmcascade import _kernels_py

try:
    from nmcascade import _kernels_cy
except ImportError:
    _kernels_cy = None


def time_fill(module, fn_name, n, m, repeat):
    rng = np.random.default_rng(0)
    points = np.linspace(70.0, 130.0, n)
    weights = np.full(n, 60.0 / (n - 1))
    s_nodes = (2.0 + 1j * np.linspace(-20.0, 20.0, m)).astype(np.complex128)
    out_k = np.empty((m, n, n), dtype=np.complex128)
    out_a = np.empty((m, n), dtype=np.complex128)
    out_d = np.empty((m, n), dtype=np.complex128)
    if fn_name == "fill_single":
        args = (points, weights, s_nodes, 1.0, 1.0, 100.0, 1.0, 1.0, 100.0, 1.0, 100.0, 100.0)
    else:
        args = (points, weights, s_nodes, 1.0, 1.0, 100.0, 1.0, 1.0, 100.0, 100.0, 100.0)
    fn = getattr(module, fn_name)
    fn(*args, out_k, out_a, out_d)  # warm up
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args, out_k, out_a, out_d)
        best = min(best, time.perf_counter() - t0)
    # representative downstream cost: stacked LU solve of (K + I) f = d
    out_k[:, np.arange(n), np.arange(n)] += 1.0
    t0 = time.perf_counter()
    np.linalg.solve(out_k, out_d[..., None])
    solve_time = time.perf_counter() - t0
    return best, solve_time


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--nodes", type=int, default=64, help="Laplace nodes per batch")
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    print(f"{'kernel':>12s} {'N':>6s} {'python':>12s} {'compiled':>12s} "
          f"{'speedup':>8s} {'LU solve':>12s}")
    for fn_name in ("fill_single", "fill_two"):
        for n in (50, 150, 300):
            py_t, solve_t = time_fill(_kernels_py, fn_name, n, args.nodes, args.repeat)
            if _kernels_cy is not None:
                cy_t, _ = time_fill(_kernels_cy, fn_name, n, args.nodes, args.repeat)
                ratio = f"{py_t / cy_t:7.1f}x"
                cy_str = f"{cy_t * 1e3:9.2f} ms"
            else:
                ratio, cy_str = "    n/a", "   missing"
            print(f"{fn_name:>12s} {n:6d} {py_t * 1e3:9.2f} ms {cy_str} "
                  f"{ratio} {solve_t * 1e3:9.2f} ms")
    if _kernels_cy is None:
        print("\ncompiled core not built; showing fallback only")


if __name__ == "__main__":
    main()
