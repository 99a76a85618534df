#!/usr/bin/env python3
"""Time the residue-ring kernels under numba and under the numpy fallback.

    python benchmarks/bench_kernels.py [--sizes 2000 10000 30000] [--modulus 2187]

Each row checks that both backends return identical arrays before timing.
"""

import argparse
import time

import numpy as np

from qeta import _kernels
from qeta.congruence import cubic_partition_series
from qeta.series import pentagonal_terms


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def bench(name, make_call, sizes, repeat):
    print(f"--- {name} ---")
    print(f"{'n':>8} {'numba [s]':>11} {'numpy [s]':>11} {'speedup':>8}")
    for n in sizes:
        call = make_call(n)
        timings, outputs = {}, {}
        for backend in ("numba", "numpy"):
            if backend == "numba" and not _kernels.HAVE_NUMBA:
                continue
            _kernels.set_backend(backend)
            call()  # compile / warm caches
            timings[backend], outputs[backend] = best_of(call, repeat)
        if len(outputs) == 2:
            same = all(np.array_equal(a, b) for a, b in zip(np.atleast_1d(outputs["numba"]), np.atleast_1d(outputs["numpy"])))
            if not same:
                raise SystemExit(f"{name}: backends disagree at n={n}")
            print(f"{n:>8} {timings['numba']:>11.4f} {timings['numpy']:>11.4f} "
                  f"{timings['numpy'] / timings['numba']:>7.1f}x")
        else:
            print(f"{n:>8} {'-':>11} {timings['numpy']:>11.4f} {'-':>8}")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[2000, 10000, 30000])
    ap.add_argument("--modulus", type=int, default=3**7)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    m = args.modulus
    rng = np.random.default_rng(0)
    initial = _kernels.get_backend()

    def conv(n):
        a = rng.integers(0, m, n, dtype=np.int64)
        b = rng.integers(0, m, n, dtype=np.int64)
        return lambda: _kernels.conv_mod(a, b, n, m)

    def sparse_div(n):
        terms = pentagonal_terms(n)
        idx = np.array([e for e, _ in terms], dtype=np.int64)
        val = np.array([s for _, s in terms], dtype=np.int64)
        num = np.zeros(n, dtype=np.int64)
        num[0] = 1
        return lambda: _kernels.sparse_div_mod(num, idx, val, m)

    def cubic(n):
        return lambda: cubic_partition_series(n, m).coeffs

    try:
        bench(f"conv_mod (m={m})", conv, args.sizes, args.repeat)
        bench(f"sparse_div_mod, partition numbers (m={m})", sparse_div, args.sizes, args.repeat)
        bench(f"cubic partition series end to end (m={m})", cubic, args.sizes, args.repeat)
    finally:
        _kernels.set_backend(initial)


if __name__ == "__main__":
    main()
