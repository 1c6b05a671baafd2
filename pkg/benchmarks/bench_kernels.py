"""Benchmark the JIT kernels against their pure-numpy fallbacks.

Run:  python benchmarks/bench_kernels.py [--quick]

The numpy implementations are what you get with WAVECAUCHY_NUMBA=0; this
script times both directly so the comparison does not depend on the env flag.
"""

import argparse
import time

import numpy as np

from wavecauchy import _kernels
from wavecauchy._accel import HAVE_NUMBA


def timeit(fn, *args, repeats=5):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - start)
    return best


def bench_sinc(size, repeats):
    z = np.random.default_rng(0).uniform(-30, 30, size)
    rows = [("sinc_ratio/numpy", timeit(_kernels.sinc_ratio_numpy, z, repeats=repeats))]
    if HAVE_NUMBA:
        _kernels.sinc_ratio_numba(z[:16])  # compile outside the timer
        rows.append(("sinc_ratio/numba", timeit(_kernels.sinc_ratio_numba, z, repeats=repeats)))
    return size, rows


def bench_multiplier(size, repeats):
    rng = np.random.default_rng(1)
    phi = rng.standard_normal(size) + 1j * rng.standard_normal(size)
    psi = rng.standard_normal(size) + 1j * rng.standard_normal(size)
    k = np.abs(rng.standard_normal(size)) * 20.0
    rows = [("wave_multiplier/numpy",
             timeit(_kernels.wave_multiplier_numpy, phi, psi, k, 1.5, repeats=repeats))]
    if HAVE_NUMBA:
        _kernels.wave_multiplier_numba(phi[:16], psi[:16], k[:16], 1.5)
        rows.append(("wave_multiplier/numba",
                     timeit(_kernels.wave_multiplier_numba, phi, psi, k, 1.5, repeats=repeats)))
    return size, rows


def bench_dft(n_points, n_freqs, repeats):
    rng = np.random.default_rng(2)
    points = rng.uniform(-2, 2, size=(n_points, 3))
    freqs = rng.uniform(-6, 6, size=(n_freqs, 3))
    coeffs = rng.standard_normal(n_freqs) + 1j * rng.standard_normal(n_freqs)
    rows = [("dft_at_points/numpy",
             timeit(_kernels.dft_at_points_numpy, points, freqs, coeffs, repeats=repeats))]
    if HAVE_NUMBA:
        _kernels.dft_at_points_numba(points[:4], freqs, coeffs)
        rows.append(("dft_at_points/numba",
                     timeit(_kernels.dft_at_points_numba, points, freqs, coeffs,
                            repeats=repeats)))
    return n_points * n_freqs, rows


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--quick", action="store_true", help="small sizes for smoke runs")
    args = parser.parse_args()

    lattice = 64**3 if not args.quick else 64**2
    dft_points = 2048 if not args.quick else 128
    dft_freqs = 32**3 if not args.quick else 32**2
    repeats = 3 if not args.quick else 2

    print(f"numba available: {HAVE_NUMBA}; active path: "
          f"{'numba' if _kernels.using_numba() else 'numpy'}")
    for work, rows in (bench_sinc(lattice, repeats),
                       bench_multiplier(lattice, repeats),
                       bench_dft(dft_points, dft_freqs, repeats)):
        base = rows[0][1]
        for name, seconds in rows:
            rate = work / seconds / 1e6
            speedup = base / seconds
            print(f"{name:26s} {seconds * 1e3:10.2f} ms   {rate:9.1f} M elem/s   "
                  f"x{speedup:.2f}")
        print()


if __name__ == "__main__":
    main()
