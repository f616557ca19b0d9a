"""Compare the compiled and pure-Python round kernels.

    python benchmarks/bench_kernels.py [--rounds 2000] [--seeds 3]

Both backends run the same configs; trajectories are checked for equality
before timings are reported.
"""

import argparse
import time

from mgear import NetworkConfig
from mgear.protocol import BACKENDS, run_simulation


def bench(config, backend, seeds):
    results, t0 = [], time.perf_counter()
    for seed in seeds:
        results.append(run_simulation(config.replace(seed=seed), backend=backend))
    elapsed = time.perf_counter() - t0
    rounds = sum(len(r.series) for r in results)
    return elapsed, rounds, results


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--rounds", type=int, default=2000, help="rounds per run (max_rounds)")
    ap.add_argument("--seeds", type=int, default=3)
    ap.add_argument("--n", type=int, default=100)
    args = ap.parse_args()
    seeds = range(1, args.seeds + 1)

    print(f"{'protocol':8} {'backend':8} {'rounds':>8} {'seconds':>9} {'us/round':>9} {'speedup':>8}")
    for protocol in ("mgear", "leach"):
        cfg = NetworkConfig(protocol=protocol, n=args.n, max_rounds=args.rounds)
        timings = {}
        reference = None
        for backend in sorted(BACKENDS, reverse=True):
            elapsed, rounds, results = bench(cfg, backend, seeds)
            series = [r.series for r in results]
            if reference is None:
                reference = series
            elif series != reference:
                raise SystemExit(f"{backend} trajectory differs from the other backend")
            timings[backend] = elapsed
            speedup = timings["python"] / elapsed if "python" in timings else float("nan")
            print(f"{protocol:8} {backend:8} {rounds:8d} {elapsed:9.3f} {1e6 * elapsed / rounds:9.1f} {speedup:8.1f}x")

    if "cython" in BACKENDS:
        cfg = NetworkConfig()
        t0 = time.perf_counter()
        res = run_simulation(cfg)
        print(f"\nfull default M-GEAR run (compiled): {len(res.series)} rounds in {time.perf_counter() - t0:.2f} s")


if __name__ == "__main__":
    main()
