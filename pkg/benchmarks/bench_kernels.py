#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-Python fallback.

Run from the repository root:

    python benchmarks/bench_kernels.py

The active backend inside one process is fixed at import time by the
MOLTEXT_NUMBA environment variable, so both paths are imported here
explicitly through the module's *_py functions and the jitted wrappers.
"""

from __future__ import annotations

import time

import numpy as np

from moltext import kernels


def _random_strings(rng, count, max_len=40):
    out = []
    for _ in range(count):
        length = rng.integers(0, max_len + 1)
        out.append(rng.integers(0, 26, size=length, dtype=np.uint32))
    return out


def bench_levenshtein(rng, pairs=2000):
    strings = _random_strings(rng, pairs * 2)
    jobs = list(zip(strings[::2], strings[1::2]))

    def run(fn):
        start = time.perf_counter()
        total = 0
        for a, b in jobs:
            total += fn(a, b)
        return time.perf_counter() - start, total

    results = {}
    if kernels.NUMBA_AVAILABLE:
        kernels.levenshtein_codes(jobs[0][0], jobs[0][1])  # compile
        results["numba"] = run(kernels.levenshtein_codes)
    results["python"] = run(kernels.levenshtein_codes_py)
    return results


def bench_selfcheck(rng, n_strings=400):
    arr = np.zeros((n_strings, 8), dtype=np.uint8)
    lens = np.zeros(n_strings, dtype=np.int64)
    for i in range(n_strings):
        lens[i] = rng.integers(0, 9)
        arr[i, : lens[i]] = rng.integers(0, 3, size=lens[i])
    results = {}
    if kernels.NUMBA_AVAILABLE:
        kernels.levenshtein_selfcheck(arr[:4], lens[:4])  # compile
        start = time.perf_counter()
        bad = kernels.levenshtein_selfcheck(arr, lens)
        results["numba"] = (time.perf_counter() - start, bad)
    start = time.perf_counter()
    bad = kernels.levenshtein_selfcheck_py(arr, lens)
    results["python"] = (time.perf_counter() - start, bad)
    return results


def main():
    rng = np.random.default_rng(0)
    print(f"active backend: {kernels.BACKEND}")
    print()
    print("levenshtein, 2000 random pairs (len <= 40):")
    for name, (elapsed, total) in bench_levenshtein(rng).items():
        print(f"  {name:7s} {elapsed * 1000:9.1f} ms   (checksum {total})")
    print()
    print("pairwise self-check sweep, 400 strings -> 160k pairs:")
    for name, (elapsed, bad) in bench_selfcheck(rng).items():
        print(f"  {name:7s} {elapsed * 1000:9.1f} ms   (mismatches {bad})")


if __name__ == "__main__":
    main()
