#!/usr/bin/env python3
"""Benchmark the compiled kernel against the pure-Python fallback.

Replays the same traces through both backends and prints updates/second
plus the speedup, per policy.  Results are checked for bit-identity while
timing, so this doubles as a quick consistency pass.

    python3 benchmarks/kernel_bench.py [--updates N] [--repeat K]
"""

import argparse
import time

import numpy as np

import aoisim.engine as eng
from aoisim import DistributionSpec, EngineOptions, generate_trace
from aoisim.engine import run, run_ps

POLICIES = ["fcfs", "lcfs", "random", "sjf", "lcfs_p", "sjf_p", "srpt",
            "ade", "ads", "adm", "ade_pi", "srpt_i", "lcfs_pi", "ps"]


def one_run(trace, policy, backend):
    opts = EngineOptions(decision_log=False, backend=backend)
    if policy == "ps":
        return run_ps(trace, opts)
    return run(trace, policy, opts)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--updates", type=int, default=100_000)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--rho", type=float, default=0.9)
    args = ap.parse_args()

    if eng._kernel_cy is None:
        raise SystemExit("compiled kernel missing; build with "
                         "`python3 setup.py build_ext --inplace`")

    trace = generate_trace(DistributionSpec("exponential", 1.0 / args.rho),
                           DistributionSpec("exponential", 1.0),
                           args.updates, seed=12345)

    print(f"trace: M/M/1, rho={args.rho}, n={args.updates}, "
          f"best of {args.repeat}")
    print(f"{'policy':10s} {'cython':>12s} {'python':>12s} {'speedup':>9s}")
    for policy in POLICIES:
        rates = {}
        results = {}
        for backend in ("cython", "python"):
            best = float("inf")
            for _ in range(args.repeat):
                t0 = time.perf_counter()
                results[backend] = one_run(trace, policy, backend)
                best = min(best, time.perf_counter() - t0)
            rates[backend] = args.updates / best
        a, b = results["cython"], results["python"]
        assert a.avg_aoi == b.avg_aoi, policy
        assert np.array_equal(a.deliver_times, b.deliver_times), policy
        print(f"{policy:10s} {rates['cython']:>10.0f}/s {rates['python']:>10.0f}/s "
              f"{rates['cython'] / rates['python']:>8.1f}x")


if __name__ == "__main__":
    main()
