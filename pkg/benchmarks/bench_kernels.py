"""Compare the compiled and NumPy kernels on the two hot paths.

    python3 benchmarks/bench_kernels.py [--n 200000] [--repeats 3]

Prints the best-of-``repeats`` wall time per kernel and backend, and checks
that both backends return the same answers.
"""
import argparse
import time

import numpy as np

from lsec import _backend, _fallback
from lsec.knn import candidate_table

try:
    from lsec import _kernels
except ImportError:
    _kernels = None


def best_time(fn, repeats):
    best = np.inf
    out = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=200_000)
    ap.add_argument("--d", type=int, default=2)
    ap.add_argument("--p", type=int, default=1000)
    ap.add_argument("--k", type=int, default=60, help="centers for assign_nearest")
    ap.add_argument("--K", type=int, default=5)
    ap.add_argument("--repeats", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    rng = np.random.default_rng(args.seed)
    X = rng.normal(size=(args.n, args.d))
    C = rng.normal(size=(args.k, args.d))
    L = rng.normal(size=(args.p, args.d))
    owner, _ = _backend.assign_nearest(X, L, impl=_fallback)
    cand = candidate_table(L, max(2 * args.K, 10))

    cases = {
        f"assign_nearest n={args.n} k={args.k}":
            lambda impl: _backend.assign_nearest(X, C, num_threads=1, impl=impl),
        f"assign_nearest n={args.n} k={args.p}":
            lambda impl: _backend.assign_nearest(X, L, num_threads=1, impl=impl),
        f"knn_candidates n={args.n} K={args.K} K'={cand.shape[1]}":
            lambda impl: _backend.knn_candidates(X, L, cand, owner, args.K, num_threads=1,
                                                 impl=impl),
    }
    print(f"{'kernel':<44}{'numpy s':>10}{'cython s':>10}{'speedup':>9}")
    for name, run in cases.items():
        t_py, ref = best_time(lambda: run(_fallback), args.repeats)
        if _kernels is None:
            print(f"{name:<44}{t_py:>10.3f}{'n/a':>10}{'':>9}")
            continue
        t_cy, out = best_time(lambda: run(_kernels), args.repeats)
        assert np.array_equal(ref[0], out[0]), name
        print(f"{name:<44}{t_py:>10.3f}{t_cy:>10.3f}{t_py / t_cy:>8.1f}x")


if __name__ == "__main__":
    main()
