"""Time each kernel on its compiled (numba) and pure-numpy paths.

    python3 benchmarks/bench_kernels.py --n 20000 --repeat 3

Both paths get the same inputs; outputs are compared before timing.
"""
import argparse
import timeit

import numba
import numpy as np

from rrtlab import kernels


def _inputs(n, seed):
    rng = np.random.default_rng(seed)
    u1 = rng.random((n + 1, 1))
    u2 = rng.random((n + 1, 2))
    parent = kernels.PURE["ua_attach"](u1, 1)[:, 0].copy()
    back2 = kernels.PURE["ua_attach"](u2, 2)
    size = kernels.PURE["subtree_sizes"](parent)
    start, kids = kernels.PURE["children_csr"](parent)
    record = np.array([n // 4, n // 2, n], dtype=np.int64)
    cherry = np.array([0, 0, 1, 1], dtype=np.int64)
    return {
        "ua_attach": (u2, 2),
        "pa_attach": (u2, 2, False),
        "subtree_sizes": (parent,),
        "children_csr": (parent,),
        "small_codes": (start, kids, size, 4),
        "windowed_count": (parent, start, kids, size, cherry, 2, 6),
        "diamond_trajectory": (back2, record),
        "clique_trajectory": (back2, 2, record),
    }


def _same(a, b):
    if isinstance(a, tuple):
        return all(_same(x, y) for x, y in zip(a, b))
    return np.array_equal(np.asarray(a), np.asarray(b))


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--n", type=int, default=20_000)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    print(f"{'kernel':<20} {'pure [s]':>10} {'numba [s]':>10} {'speedup':>9}")
    for name, call_args in _inputs(args.n, args.seed).items():
        pure = kernels.PURE[name]
        jit = numba.njit(kernels.LOOPS[name])
        ref = pure(*call_args)
        got = jit(*call_args)  # first call compiles
        if not _same(ref, got):
            raise SystemExit(f"{name}: compiled and pure outputs differ")
        t_pure = min(timeit.repeat(lambda: pure(*call_args), number=1, repeat=args.repeat))
        t_jit = min(timeit.repeat(lambda: jit(*call_args), number=1, repeat=args.repeat))
        print(f"{name:<20} {t_pure:>10.4f} {t_jit:>10.4f} {t_pure / t_jit:>8.1f}x")


if __name__ == "__main__":
    main()
