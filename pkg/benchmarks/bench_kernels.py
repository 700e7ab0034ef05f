#!/usr/bin/env python3
"""Benchmark the compiled kernel extension against the pure-Python backend.

Each hot kernel is timed on a workload shaped like the real experiments
(congruence sweeps over dyadic ranges, brute-force congruence-sum oracles,
Frobenius root counts along the primes, bulk factorization of form values).

Usage:
    python benchmarks/bench_kernels.py [--quick]
"""

import argparse
import time

import numpy as np

from formsieve.kernels import get_backend
from formsieve.primes import sieve_primes

CUBIC = (1, 0, 0, 2)
G = (1, 0, 0, 2)  # dehomogenized: 2t^3 + 1


def timed(fn, repeats=1):
    best = float("inf")
    out = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def bench_poly_roots(backend, quick):
    d_max = 2000 if quick else 6000

    def run():
        total = 0
        for d in range(1, d_max):
            total += len(backend.poly_roots_mod(G, d))
        return total

    return run


def bench_frobenius(backend, quick):
    primes = [int(p) for p in sieve_primes(20000 if quick else 200000)]

    def run():
        return sum(backend.frobenius_counts(G, primes))

    return run


def bench_ad_weight_sums(backend, quick):
    N = 200 if quick else 400
    w = np.linspace(0.0, 1.0, N)
    ds = range(170, 190) if quick else range(380, 420)

    def run():
        acc = 0.0
        for d in ds:
            acc += float(np.sum(np.asarray(backend.ad_weight_sums(CUBIC, d, N, w))))
        return acc

    return run


def bench_count_solutions(backend, quick):
    d = 400 if quick else 900

    def run():
        return backend.count_congruence_solutions(CUBIC, d)

    return run


def bench_factor(backend, quick):
    # form values along a census row
    vals = [abs(p**3 + 2 * n**3) for p in (97, 199, 293) for n in range(1, 200 if quick else 500)]

    def run():
        total = 0
        for v in vals:
            total += len(backend.factor_u64(v))
        return total

    return run


BENCHES = [
    ("poly_roots_mod sweep", bench_poly_roots),
    ("frobenius_counts over primes", bench_frobenius),
    ("ad_weight_sums dyadic block", bench_ad_weight_sums),
    ("count_congruence_solutions", bench_count_solutions),
    ("factor_u64 census row", bench_factor),
]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--quick", action="store_true", help="smaller workloads")
    args = ap.parse_args()

    py = get_backend("python")
    try:
        cy = get_backend("cython")
    except ImportError:
        print("compiled extension not available; nothing to compare")
        return 1

    print(f"{'kernel':35s} {'python':>10s} {'cython':>10s} {'speedup':>9s}")
    for name, make in BENCHES:
        t_py, out_py = timed(make(py, args.quick))
        t_cy, out_cy = timed(make(cy, args.quick))
        if isinstance(out_py, float):
            assert abs(out_py - out_cy) < 1e-9 * max(1.0, abs(out_py))
        else:
            assert tuple(np.atleast_1d(out_py)) == tuple(np.atleast_1d(out_cy))
        print(f"{name:35s} {t_py:9.3f}s {t_cy:9.3f}s {t_py / t_cy:8.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
