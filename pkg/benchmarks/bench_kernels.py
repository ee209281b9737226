"""Compare the numba kernels with the numpy fallback on butterfly tables.

    python benchmarks/bench_kernels.py [--k 3 5 7] [--repeat 3]
"""
import argparse
import time

import numpy as np

from butterfly_sbox import kernels
from butterfly_sbox.butterfly import ButterflyParams, materialize_lut
from butterfly_sbox.gf2k import make_field

KERNELS = {
    "walsh_hist": lambda b, F: b.walsh_hist(F.lut, F.n, F.m, 1, 1 << F.m),
    "ddt_hist": lambda b, F: b.ddt_hist(F.lut, F.n, F.m, 1, 1 << F.n),
    "moebius": lambda b, F: b.moebius(F.lut.copy()),
}


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--k", type=int, nargs="+", default=[3, 5, 7])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    if not kernels.NUMBA_AVAILABLE:
        raise SystemExit("numba is not installed; nothing to compare")
    kernels.warmup()
    print(f"{'k':>2} {'kernel':<11} {'numpy s':>10} {'numba s':>10} {'speedup':>8}  same")
    for k in args.k:
        F = materialize_lut(ButterflyParams.gold(make_field(k), 1, 0, 2))
        for name, call in KERNELS.items():
            t_np, r_np = best_of(lambda: call(kernels.numpy_backend, F), args.repeat)
            t_nb, r_nb = best_of(lambda: call(kernels.numba_backend, F), args.repeat)
            same = np.array_equal(r_np, r_nb)
            print(f"{k:>2} {name:<11} {t_np:>10.4f} {t_nb:>10.4f} {t_np / t_nb:>8.1f}  {same}")


if __name__ == "__main__":
    main()
