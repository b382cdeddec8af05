"""Compare the numba kernels against their numpy fallbacks.

    python benchmarks/bench_kernels.py [--repeat N]

Both implementations are imported side by side, so the env flag does not
matter here. Results are checked for agreement before timing.
"""

import argparse
import time

import numpy as np

from skeleta import _kernels
from skeleta.exactla import _prime


def best_of(fn, repeat):
    fn()  # warm up, includes jit compilation or cache load
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def rank_cases(rng):
    p = _prime(0)
    for n in (16, 64, 160):
        a = rng.integers(-9, 10, size=(n, n + n // 2)).astype(np.int64)
        yield f"rank_mod_p {n}x{n + n // 2}", "rank_mod_p", (a, p)


def box_cases():
    for d, r in ((2, 200), (3, 30), (4, 9)):
        # cross-polytope of radius r: sum |x_i| <= r
        signs = np.array(np.meshgrid(*[[-1, 1]] * d)).reshape(d, -1).T
        normals = (-signs).astype(np.int64)
        offsets = np.full(len(signs), r, dtype=np.int64)
        lo = np.full(d, -r, dtype=np.int64)
        hi = np.full(d, r, dtype=np.int64)
        yield f"box_counts d={d} r={r}", "box_counts", (normals, offsets, lo, hi)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    if not _kernels.numba_impl:
        print("numba unavailable; only the numpy path can run")
    rng = np.random.default_rng(0)
    print(f"{'case':<28} {'numpy ms':>10} {'numba ms':>10} {'speedup':>8}")
    for label, key, call_args in [*rank_cases(rng), *box_cases()]:
        slow = _kernels.numpy_impl[key]
        t_np = best_of(lambda: slow(*call_args), args.repeat)
        if _kernels.numba_impl:
            fast = _kernels.numba_impl[key]
            assert fast(*call_args) == slow(*call_args), label
            t_nb = best_of(lambda: fast(*call_args), args.repeat)
            print(f"{label:<28} {t_np * 1e3:>10.3f} {t_nb * 1e3:>10.3f} {t_np / t_nb:>7.1f}x")
        else:
            print(f"{label:<28} {t_np * 1e3:>10.3f} {'-':>10} {'-':>8}")


if __name__ == "__main__":
    main()
