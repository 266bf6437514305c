"""Time the compiled kernels against their numpy or interpreted fallbacks.

Usage: python3 benchmarks/bench_kernels.py [--size 100000] [--repeat 5]
"""
import argparse
import timeit

import numpy as np

from sklab import kernels
from sklab._accel import compile_always
from sklab.paths import StepPath
from sklab.skorokhod import completed_graph, j1_distance, m1_distance


def random_path(rng, k):
    times = np.concatenate(([0.0], np.sort(rng.uniform(0.001, 1.0, k))))
    return StepPath(times, np.cumsum(rng.normal(size=k + 1)), 1.0)


def cases(size, rng):
    xi = rng.standard_cauchy(size)
    eta = rng.standard_cauchy(size)
    a = np.sort(rng.normal(size=size))
    b = np.sort(rng.normal(size=size))
    k = max(size // 1000, 10)
    p, q = random_path(rng, k), random_path(rng, k)
    P = np.ascontiguousarray(completed_graph(p).vertices)
    Q = np.ascontiguousarray(completed_graph(q).vertices)
    # deciding at the true distance forces a full sweep
    d_m1, d_j1 = m1_distance(p, q), j1_distance(p, q)
    j1_args = (p.times, p.values, q.times, q.values, 1.0, d_j1)
    return [
        ("prw_functionals", kernels._prw_numpy, kernels._prw_loop, (xi, eta)),
        ("ks_sorted", kernels._ks_numpy, kernels._ks_loop, (a, b)),
        ("oscillation", kernels._oscillation_loop, kernels._oscillation_loop,
         (p.times, p.values, 0.05)),
        ("m1_decide", kernels._m1_decide, kernels._m1_decide, (P, Q, d_m1)),
        ("j1_decide", kernels._j1_decide, kernels._j1_decide, j1_args),
    ]


def best(func, args, repeat):
    return min(timeit.repeat(lambda: func(*args), number=1, repeat=repeat))


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--size", type=int, default=100_000, help="walk and sample length")
    parser.add_argument("--repeat", type=int, default=5, help="timing repetitions (best kept)")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)

    rng = np.random.default_rng(args.seed)
    print(f"{'kernel':<18}{'fallback [ms]':>15}{'numba [ms]':>12}{'speed-up':>10}")
    for name, fallback, loop, fargs in cases(args.size, rng):
        compiled = compile_always(loop)
        compiled(*fargs)  # compile outside the timed region
        t_fb = best(fallback, fargs, args.repeat)
        t_nb = best(compiled, fargs, args.repeat)
        print(f"{name:<18}{1e3 * t_fb:>15.3f}{1e3 * t_nb:>12.3f}{t_fb / t_nb:>9.1f}x")


if __name__ == "__main__":
    main()
