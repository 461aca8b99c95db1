"""Timing for the two Sturm-count kernels on oracle-shaped matrices.

Builds the same tridiagonal the finite-difference oracle assembles for
hydrogen (3D, l=0) and times eigenvalue counting with the pure-numpy
kernel against the numba one, across grid sizes and shift-batch widths.
Batch width 1 is what a plain bisection step issues; wider batches are
what the numpy kernel vectorizes over.

Run: python3 benchmarks/bench_sturm.py
"""
import time

import numpy as np

from slet import _kernels, oracle, potentials


def oracle_matrix(n, box_radius=40.0):
    h = box_radius / (n + 1)
    r = h * np.arange(1, n + 1, dtype=float)
    diag = 2.0 / h**2 + oracle.effective_potential(3, 0, potentials.coulomb(), r)
    off = 1.0 / h**2
    off2 = np.full(n - 1, off * off)
    pivmin = np.finfo(np.float64).tiny * max(1.0, off * off)
    return diag, off2, pivmin


def time_kernel(fn, diag, off2, shifts, pivmin, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(diag, off2, shifts, pivmin)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    print(f"numba available: {_kernels.HAS_NUMBA}; "
          f"selected backend: {_kernels.BACKEND}")
    kernels = [("numpy", _kernels.sturm_counts_numpy)]
    if _kernels.HAS_NUMBA:
        kernels.append(("numba", _kernels.sturm_counts_numba))

    rng = np.random.default_rng(7)
    header = f"{'N':>7}  {'batch':>5}" + "".join(
        f"  {name + '/call':>12}" for name, _ in kernels)
    if _kernels.HAS_NUMBA:
        header += f"  {'speedup':>7}"
    print(header)

    for n in (1000, 4000, 16000):
        diag, off2, pivmin = oracle_matrix(n)
        lo, hi = float(diag.min()), float(diag.max())
        for batch in (1, 8, 64):
            shifts = rng.uniform(lo, hi, size=batch)
            # warm-up also triggers the jit compile
            for _, fn in kernels:
                fn(diag, off2, shifts, pivmin)
            repeats = max(5, 2_000_000 // (n * batch))
            times = [time_kernel(fn, diag, off2, shifts, pivmin, repeats)
                     for _, fn in kernels]
            row = f"{n:>7}  {batch:>5}" + "".join(
                f"  {t * 1e6:>10.1f}us" for t in times)
            if len(times) == 2:
                row += f"  {times[0] / times[1]:>6.1f}x"
            print(row)


if __name__ == "__main__":
    main()
