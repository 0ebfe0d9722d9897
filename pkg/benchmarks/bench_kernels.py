"""Time the numba kernels against the pure-numpy fallbacks.

    python benchmarks/bench_kernels.py [--repeat 3]

Both paths are called directly, so the DTWMEAN_DISABLE_NUMBA flag is not
needed here.  The first numba call (compilation) is excluded from timings.
"""
import argparse
import time

import numpy as np

from dtwmean import dtw as dtw_mod
from dtwmean import exact as exact_mod


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def cases(rng):
    x, y = rng.standard_normal((2, 300)).cumsum(axis=1)
    yield "dtw n=300", lambda: dtw_mod._accumulate_nb(x, y), lambda: dtw_mod._accumulate_np(x, y)
    for k, n in ((2, 40), (2, 80), (3, 12), (3, 18)):
        S = list(rng.standard_normal((k, n)).cumsum(axis=1))
        yield (
            f"exact mean k={k} n={n}",
            lambda S=S: exact_mod.exact_mean_dp(S, backend="numba"),
            lambda S=S: exact_mod.exact_mean_dp(S, backend="numpy"),
        )


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()
    rng = np.random.default_rng(args.seed)
    print(f"{'kernel':<22}{'numba [s]':>12}{'numpy [s]':>12}{'speedup':>10}")
    for name, fast, slow in cases(rng):
        fast()
        t_fast = best_of(fast, args.repeat)
        t_slow = best_of(slow, args.repeat)
        print(f"{name:<22}{t_fast:>12.4f}{t_slow:>12.4f}{t_slow / t_fast:>9.1f}x")


if __name__ == "__main__":
    main()
