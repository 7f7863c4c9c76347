"""Timing comparison of the numba kernels against their numpy fallbacks.

Run directly:  python benchmarks/bench_kernels.py

Both implementations are always importable, so this measures them in one
process; the first numba call includes JIT compilation and is excluded by a
warmup pass.  Set VERBLUNSKY_PURE_NUMPY=1 to check what the package itself
would dispatch to.
"""

import time

import numpy as np

from verblunsky import kernels

SHAPES = [(2_000, 50), (20_000, 200)]  # (batch, sequence length)
REPEATS = 5


def timeit(fn, *args):
    best = float("inf")
    for _ in range(REPEATS):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def alpha_batch(rng, S, N):
    return np.ascontiguousarray(
        rng.uniform(0.05, 0.6, (S, N)) * np.exp(2j * np.pi * rng.random((S, N)))
    )


def main():
    if not kernels.HAVE_NUMBA:
        print("numba is not importable; timing the numpy path against itself")
    print(f"{'kernel':<12} {'batch x len':>14} {'numba':>10} {'numpy':>10} {'speedup':>8}")

    rng = np.random.default_rng(0)
    for S, N in SHAPES:
        K = min(N, 8)
        alphas = alpha_batch(rng, S, N)
        f = rng.standard_normal((S, K + 1)) + 1j * rng.standard_normal((S, K + 1))
        f[:, 0] = 0.0
        f = np.ascontiguousarray(f)
        c = np.ascontiguousarray(
            np.fft.fft(np.exp(rng.standard_normal((S, 64))), axis=1)[:, : K + 1]
            / 64
        )

        cases = [
            ("szego_low", kernels._szego_low_nb, kernels._szego_low_np, (alphas, K)),
            ("exp_neg", kernels._exp_neg_nb, kernels._exp_neg_np, (f,)),
            ("levinson", kernels._levinson_nb, kernels._levinson_np, (c, K)),
        ]
        for name, nb, np_, args in cases:
            nb(*args)  # warmup: JIT compile before timing
            t_nb = timeit(nb, *args)
            t_np = timeit(np_, *args)
            print(
                f"{name:<12} {S:>8} x {N:<4} {t_nb:>9.4f}s {t_np:>9.4f}s "
                f"{t_np / t_nb:>7.1f}x"
            )


if __name__ == "__main__":
    main()
