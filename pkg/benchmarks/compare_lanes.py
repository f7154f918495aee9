#!/usr/bin/env python3
"""Benchmark the compiled kernel lane against the numpy fallback.

Runs each kernel entry point on representative workloads and reports
wall-clock times plus the speedup.  Outputs are also compared so a lane
regression shows up as a correctness failure, not just a timing change.

Usage: python benchmarks/compare_lanes.py [--quick]
"""

import argparse
import time

import numpy as np

from annealstat._kernels import lanes, model_arrays
from annealstat.models import IsingModel, QuboModel
from annealstat.samplers import geometric_beta_schedule


def random_model(seed, n, convention="qubo", density=1.0):
    rng = np.random.default_rng(seed)
    linear = {i: float(rng.uniform(-1, 1)) for i in range(n)}
    quad = {
        (i, j): float(rng.uniform(-1, 1))
        for i in range(n)
        for j in range(i + 1, n)
        if rng.random() < density
    }
    if convention == "qubo":
        return QuboModel(num_vars=n, linear=linear, quadratic=quad)
    return IsingModel(num_vars=n, h=linear, J=quad)


def workloads(quick):
    scale = 0.25 if quick else 1.0

    def sized(x):
        return max(1, int(x * scale))

    arr16 = model_arrays(random_model(0, 16))
    arr36 = model_arrays(random_model(1, 36, density=0.3))
    arr22 = model_arrays(random_model(2, 22, convention="ising", density=0.4))
    arr18 = model_arrays(random_model(3, 18))

    betas_long = geometric_beta_schedule(0.1, 10.0, 1000)
    betas_short = geometric_beta_schedule(0.1, 10.0, 200)

    yield (
        "sa: n=16 dense, 1000 reads x 1000 sweeps",
        lambda kern: kern.sa_run(
            arr16.lin, arr16.nbr_ptr, arr16.nbr_idx, arr16.nbr_val, arr16.low,
            betas_long, sized(1000), 11, 1,
        ),
    )
    yield (
        "sa: n=36 sparse, 10000 reads x 200 sweeps",
        lambda kern: kern.sa_run(
            arr36.lin, arr36.nbr_ptr, arr36.nbr_idx, arr36.nbr_val, arr36.low,
            betas_short, sized(10000), 12, 1,
        ),
    )
    yield (
        "sa: n=16 dense, 8 reads x 1000 sweeps (narrow)",
        lambda kern: kern.sa_run(
            arr16.lin, arr16.nbr_ptr, arr16.nbr_idx, arr16.nbr_val, arr16.low,
            betas_long, 8, 13, 1,
        ),
    )

    reads = sized(400)
    lin_rows = np.ascontiguousarray(np.tile(arr22.lin, (reads, 1)))
    val_rows = np.ascontiguousarray(np.tile(arr22.nbr_val, (reads, 1)))
    yield (
        "gibbs: n=22, 400 reads x 256 sweeps",
        lambda kern: kern.gibbs_run(
            lin_rows[:reads], arr22.nbr_ptr, arr22.nbr_idx, val_rows[:reads],
            arr22.low, 2.0, 256, 14, 2,
        ),
    )

    rows = sized(16)
    rng = np.random.default_rng(9)
    lin18 = np.ascontiguousarray(arr18.lin + 0.01 * rng.normal(size=(rows, 18)))
    pair18 = np.ascontiguousarray(
        arr18.pair_val + 0.01 * rng.normal(size=(rows, arr18.pair_val.shape[0]))
    )
    yield (
        "spectrum: n=18 dense, 16 perturbed rows (2^18 states each)",
        lambda kern: kern.dp_spectrum_batch(
            lin18, arr18.pair_i, arr18.pair_j, pair18, arr18.low
        ),
    )


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--quick", action="store_true", help="scale workloads down 4x")
    args = parser.parse_args()

    available = lanes()
    if "compiled" not in available:
        print("compiled lane not built; run `python setup.py build_ext --inplace` first")
        return 1

    width = 58
    print(f"{'workload':<{width}} {'pure':>9} {'compiled':>9} {'speedup':>8}")
    for name, run in workloads(args.quick):
        results = {}
        times = {}
        for lane_name in ("pure", "compiled"):
            kern = available[lane_name]
            start = time.perf_counter()
            results[lane_name] = run(kern)
            times[lane_name] = time.perf_counter() - start
        match = np.array_equal(results["pure"], results["compiled"])
        note = "" if match else "  << LANE MISMATCH"
        print(
            f"{name:<{width}} {times['pure']:>8.2f}s {times['compiled']:>8.2f}s "
            f"{times['pure'] / times['compiled']:>7.1f}x{note}"
        )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
