#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-python fallback.

The two hot paths are the streaming Ornstein-Uhlenbeck section sampler
(dominates every time-section Monte Carlo run) and the compensated
power-variation sum.  Usage: python benchmarks/bench_kernels.py [--quick]
"""

import argparse
import time

import numpy as np

from heatvar import rng
from heatvar._backend import load_backend


def _time(fn, repeat=3):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_ou_section(backend, n, kres, seed=7):
    k = np.arange(1, kres + 1, dtype=np.float64)
    lam = 0.1 * k**2
    dt = 0.75 / n
    hk = np.sqrt(2 / np.pi) * np.sin(k * np.pi / 2)
    decay = np.exp(-lam * dt)
    step_sd = 0.2 * np.sqrt(-np.expm1(-2 * lam * dt) / (2 * lam))
    init_sd = 0.2 * np.sqrt(-np.expm1(-2 * lam * 0.25) / (2 * lam))
    out = np.empty(n + 1)

    def run():
        gen = rng.substream(seed, rng.TAG_TIME_SECTION)
        backend.ou_section_fill(hk, decay, step_sd, init_sd, 1e-3, n, gen, out)

    return _time(run)


def bench_power_sum(backend, m, seed=3):
    diffs = np.random.default_rng(seed).standard_normal(m) * 1e-2

    def run():
        for _ in range(50):
            backend.abs_pow_sum(diffs, 4)

    return _time(run) / 50


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--quick", action="store_true")
    args = parser.parse_args()

    backends = {}
    try:
        backends["compiled"] = load_backend("compiled")
    except ImportError:
        print("compiled backend not built; benchmarking fallback only")
    backends["python"] = load_backend("python")

    n = 2**12 if args.quick else 2**14
    kres = 1500 if args.quick else 3000
    m = 2**14

    print(f"{'kernel':<38}" + "".join(f"{name:>12}" for name in backends))
    rows = [
        (f"ou_section_fill n={n} kres={kres} [s]",
         {name: bench_ou_section(b, n, kres) for name, b in backends.items()}),
        (f"abs_pow_sum m={m} [s]",
         {name: bench_power_sum(b, m) for name, b in backends.items()}),
    ]
    for label, times in rows:
        print(f"{label:<38}" + "".join(f"{times[name]:>12.4g}" for name in backends))
        if "compiled" in times and "python" in times:
            print(f"{'  speedup':<38}{times['python'] / times['compiled']:>12.1f}x")


if __name__ == "__main__":
    main()
