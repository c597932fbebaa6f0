"""Compare the compiled kernels against the numpy fallback.

Runs both backends on identical inputs, times a few repeats, and prints the
best wall time per call plus the speedup.  The two implementations are
bit-identical, so the benchmark also cross-checks their outputs.

Usage: python3 benchmarks/bench_kernels.py [--draws N] [--rows M] [--repeats R]
"""

import argparse
import time

import numpy as np

from eprgames._kernels import available_backends
from eprgames.probability_box import named_box


def best_time(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--draws", type=int, default=1_000_000,
                        help="simulated rounds for the tally kernel")
    parser.add_argument("--rows", type=int, default=200_000,
                        help="free blocks for the completion kernel")
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args(argv)

    impls = available_backends()
    if "native" not in impls:
        print("compiled extension not available; timing the fallback only")

    rng = np.random.default_rng(7)
    ua, ub, uo = (rng.uniform(size=args.draws) for _ in range(3))
    p = named_box("chsh-max-1").p
    free = rng.uniform(size=(args.rows, 8))

    workloads = {
        "mc_tally": lambda impl: impl.mc_tally(ua, ub, uo, 0.5, 0.5, p),
        "complete_free_batch": lambda impl: impl.complete_free_batch(free, 1e-12),
    }
    sizes = {"mc_tally": args.draws, "complete_free_batch": args.rows}

    for kernel, run in workloads.items():
        results = {name: run(impl) for name, impl in impls.items()}
        if len(results) == 2:
            got, want = results["native"], results["python"]
            if kernel == "mc_tally":
                assert np.array_equal(got, want), "backends disagree"
            else:
                assert np.array_equal(got[0], want[0]) and np.array_equal(got[1], want[1])

        print(f"{kernel} ({sizes[kernel]:,} items):")
        times = {name: best_time(lambda: run(impl), args.repeats)
                 for name, impl in impls.items()}
        for name, elapsed in times.items():
            rate = sizes[kernel] / elapsed / 1e6
            print(f"  {name:>7}: {elapsed * 1e3:8.2f} ms   {rate:7.1f} M items/s")
        if len(times) == 2:
            print(f"  speedup: {times['python'] / times['native']:.2f}x")


if __name__ == "__main__":
    main()
