#!/usr/bin/env python3
"""Benchmark the compiled Smith-normal-form kernel against the pure one.

Two workload families: dense random integer matrices, and sparse
incidence-style matrices like the boundary/coboundary matrices that
dominate every cohomology computation in the library.  The compiled
kernel falls back per call on int64 overflow; the fallback rate is
reported alongside the timings.

Usage: python benchmarks/bench_snf.py [--repeats N]
"""

import argparse
import random
import time

from cechlift import _snf_py, kernels


def make_dense(rng, m, n, lo=-9, hi=9):
    return [[rng.randint(lo, hi) for _ in range(n)] for _ in range(m)]


def make_incidence(rng, m, n):
    return [[rng.choice((-1, 0, 0, 0, 0, 1)) for _ in range(n)] for _ in range(m)]


def bench(label, mats, repeats):
    t0 = time.perf_counter()
    for _ in range(repeats):
        for mat in mats:
            _snf_py.snf_with_transforms(mat)
    pure = time.perf_counter() - t0

    fallbacks = 0
    t0 = time.perf_counter()
    for _ in range(repeats):
        for mat in mats:
            if kernels.COMPILED_AVAILABLE:
                try:
                    kernels._snf_cy.snf_with_transforms(mat)
                except OverflowError:
                    fallbacks += 1
                    _snf_py.snf_with_transforms(mat)
            else:
                _snf_py.snf_with_transforms(mat)
    fast = time.perf_counter() - t0

    total = len(mats) * repeats
    speedup = pure / fast if fast else float("inf")
    print(
        f"{label:<34} pure {pure:8.3f}s   compiled {fast:8.3f}s   "
        f"speedup {speedup:5.1f}x   fallbacks {fallbacks}/{total}"
    )


def fixture_matrices():
    """The boundary matrices of the shipped fixtures: the real workload."""
    from cechlift import fixtures
    from cechlift.complexes import nerve

    mats = []
    torus, cov = fixtures.torus_product()
    for d in (1, 2):
        mats.append(torus.boundary_matrix(d))
    nrv = nerve(cov)
    for p in (0, 1, 2):
        mats.append(nrv.coboundary_matrix(p))
    cover, nrv2 = fixtures.rp2_good_cover()
    for p in (0, 1):
        mats.append(nrv2.coboundary_matrix(p))
    for piece in cover.pieces[:3]:
        mats.append(piece.coboundary_matrix(1))
    return mats


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    print(f"active backend: {kernels.BACKEND}")
    if not kernels.COMPILED_AVAILABLE:
        print("compiled kernel unavailable; timings compare pure against itself")
    rng = random.Random(20250810)

    dense_small = [make_dense(rng, 6, 6) for _ in range(60)]
    dense_mid = [make_dense(rng, 12, 12, -5, 5) for _ in range(20)]
    sparse = [make_incidence(rng, 40, 30) for _ in range(20)]
    fixture = fixture_matrices()

    bench("dense 6x6, entries <= 9", dense_small, args.repeats)
    bench("dense 12x12, entries <= 5", dense_mid, args.repeats)
    bench("incidence 40x30", sparse, args.repeats)
    bench("fixture boundary matrices", fixture, args.repeats * 3)


if __name__ == "__main__":
    main()
