#!/usr/bin/env python3
"""Timing comparison of the compiled enumeration kernels against the
pure-numpy fallback on the same inputs.

Usage: python benchmarks/bench_kernels.py [--n N] [--k K] [--repeat R]
"""

import argparse
import math
import time

import numpy as np

from greedyselect import _kernels_py
from greedyselect.model import SyntheticSpec, from_samples, synth_generate

try:
    from greedyselect import _kernels as compiled
except ImportError:
    compiled = None


def timeit(fn, repeat):
    best = math.inf
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return best, result


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=20)
    ap.add_argument("--k", type=int, default=6)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    spec = SyntheticSpec(n=args.n, m=4 * args.n, rho=0.6, seed=11, runs=1)
    model = from_samples(synth_generate(spec)[0], ["z"])
    C = np.ascontiguousarray(model.C)
    b = np.ascontiguousarray(model.target_vector("z"))
    subsets = math.comb(args.n, args.k)
    L = np.array([0], dtype=np.int64)
    cand = np.arange(1, args.n, dtype=np.int64)
    r2_0 = float(b[0] ** 2)
    gains = np.array(
        [
            float(b[[0, j]] @ np.linalg.solve(C[np.ix_([0, j], [0, j])], b[[0, j]]))
            - r2_0
            for j in cand
        ]
    )

    cases = {
        f"best_r2_scan (C({args.n},{args.k}) = {subsets} subsets)": (
            lambda mod: mod.best_r2_scan(C, b, args.k)
        ),
        f"lam_extreme_scan min ({subsets} subsets)": (
            lambda mod: mod.lam_extreme_scan(C, args.k, False)
        ),
        f"eig_range_scan ({subsets} subsets)": (
            lambda mod: mod.eig_range_scan(C, args.k)
        ),
        f"ratio_scan (|L|=1, sizes <= {args.k})": (
            lambda mod: mod.ratio_scan(C, b, L, cand, gains, args.k, 1e-12, -np.inf)
        ),
    }

    print(f"n = {args.n}, k = {args.k}, best of {args.repeat}")
    header = f"{'kernel':<48} {'numpy':>10} {'compiled':>10} {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for name, call in cases.items():
        t_py, r_py = timeit(lambda: call(_kernels_py), args.repeat)
        if compiled is None:
            print(f"{name:<48} {t_py:>9.3f}s {'n/a':>10} {'n/a':>8}")
            continue
        t_c, r_c = timeit(lambda: call(compiled), args.repeat)
        assert abs(r_py[0] - r_c[0]) < 1e-7 * max(1.0, abs(r_py[0]))
        print(f"{name:<48} {t_py:>9.3f}s {t_c:>9.3f}s {t_py / t_c:>7.1f}x")


if __name__ == "__main__":
    main()
