"""Compare the compiled and pure-Python layered-mass kernels.

    python3 benchmarks/bench_kernels.py [--sizes 1000 4000] [--delta 5] [--repeat 3]

Prints one line per graph size with the best wall time of each backend and
the largest relative disagreement between them.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from vizing_lab import kernels
from vizing_lab.graph import random_graph


def best_time(fn, args, repeat):
    best, out = float("inf"), None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t)
    return best, out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[1000, 4000])
    ap.add_argument("--delta", type=int, default=5)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    print(f"compiled backend available: {kernels.BACKEND == 'compiled'}")
    for n in args.sizes:
        g = random_graph(n, args.delta, args.seed)
        indptr, indices = g.csr()
        rng = np.random.default_rng(args.seed)
        w = rng.random(g.n) + 1e-6
        coef = 0.5 * (0.5 / args.delta) ** np.arange(g.n + 1, dtype=np.float64)
        coef[0] = 0.0
        t_py, (acc_py, ecc_py) = best_time(kernels.layered_mass_python, (indptr, indices, w, coef), args.repeat)
        line = f"n={n} m={g.m} python={t_py:.3f}s"
        if kernels.BACKEND == "compiled":
            t_c, (acc_c, ecc_c) = best_time(kernels.layered_mass_compiled, (indptr, indices, w, coef), args.repeat)
            err = float(np.max(np.abs(acc_c - acc_py) / np.maximum(np.abs(acc_py), 1e-300)))
            assert np.array_equal(ecc_c, ecc_py)
            line += f" compiled={t_c:.3f}s speedup={t_py / t_c:.1f}x max_rel_diff={err:.2e}"
        print(line)


if __name__ == "__main__":
    main()
