"""Seeded Monte Carlo estimators cross-checking the exact moment engines.

Determinism contract
--------------------
All sampling is driven by numpy's PCG64.  A run is parameterized by
``(seed, workers)``: ``SeedSequence(seed).spawn(workers)`` derives one
independent substream per worker, worker ``w`` handles a contiguous chunk of
samples (the first ``samples % workers`` chunks are one larger), and inside a
worker the draws happen in fixed blocks of :data:`BLOCK_SIZE` samples.
Results are reduced in worker order, so identical ``(seed, workers)`` gives
bit-identical streams and statistics; changing ``workers`` changes the
stream but not the distribution.

Per-block draw layout (documented so streams are reproducible from the
description alone):

* alpha sampler: one ``(block, N)`` uniform array for the moduli, then one
  ``(block, N)`` uniform array for the phases;
* f sampler: one ``(block, N, 2)`` standard-normal array, last axis holding
  the real and imaginary parts.
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .alphamoments import alpha_x_moment
from .combinatorics import MultiIndex
from .gaussian import gaussian_x_moment
from .kernels import exp_neg_series, levinson_batch, szego_low_coefficients

RNG_ALGORITHM = (
    "numpy.random PCG64; per-worker substreams from SeedSequence(seed).spawn(workers)"
)
BLOCK_SIZE = 8192


@dataclass(frozen=True)
class SampleStats:
    """Empirical mean with its standard error over ``count`` samples."""

    mean: complex | float
    stderr: float
    count: int


def _worker_chunks(samples: int, workers: int) -> list[int]:
    if workers < 1:
        raise ValueError("workers must be >= 1")
    base, extra = divmod(samples, workers)
    return [base + (1 if w < extra else 0) for w in range(workers)]


def _worker_rngs(seed: int, workers: int) -> list[np.random.Generator]:
    children = np.random.SeedSequence(seed).spawn(workers)
    return [np.random.Generator(np.random.PCG64(child)) for child in children]


def _blocks(chunk: int):
    while chunk > 0:
        b = min(chunk, BLOCK_SIZE)
        yield b
        chunk -= b


def _alpha_block(rng: np.random.Generator, beta: float, N: int, count: int) -> np.ndarray:
    """(count, N) independent draws; |alpha_n|^2 ~ Beta(1, n beta), uniform phase."""
    n = np.arange(1, N + 1, dtype=np.float64)
    u = rng.random((count, N))
    amp = np.sqrt(1.0 - u ** (1.0 / (n * beta)))
    phase = rng.random((count, N))
    return amp * np.exp(2j * np.pi * phase)


def _f_block(rng: np.random.Generator, beta: float, N: int, count: int) -> np.ndarray:
    """(count, N + 1) complex Gaussian modes, column 0 fixed to zero."""
    z = rng.standard_normal((count, N, 2))
    n = np.arange(1, N + 1, dtype=np.float64)
    scale = np.sqrt(1.0 / (2.0 * n * beta))
    out = np.zeros((count, N + 1), np.complex128)
    out[:, 1:] = (z[:, :, 0] + 1j * z[:, :, 1]) * scale
    return out


def sample_alpha(beta: float, N: int, seed: int) -> np.ndarray:
    """One sequence alpha_1..alpha_N (index n at position n-1)."""
    return sample_alpha_batch(beta, N, 1, seed)[0]


def sample_alpha_batch(
    beta: float, N: int, count: int, seed: int, *, workers: int = 1
) -> np.ndarray:
    if beta <= 0:
        raise ValueError("beta must be positive")
    out = np.empty((count, N), np.complex128)
    pos = 0
    for rng, chunk in zip(_worker_rngs(seed, workers), _worker_chunks(count, workers)):
        for b in _blocks(chunk):
            out[pos : pos + b] = _alpha_block(rng, beta, N, b)
            pos += b
    return out


def sample_f(beta: float, N: int, seed: int) -> np.ndarray:
    """One draw of the Gaussian modes f_0..f_N with f_0 = 0, E|f_n|^2 = 1/(n beta)."""
    return sample_f_batch(beta, N, 1, seed)[0]


def sample_f_batch(
    beta: float, N: int, count: int, seed: int, *, workers: int = 1
) -> np.ndarray:
    if beta <= 0:
        raise ValueError("beta must be positive")
    out = np.empty((count, N + 1), np.complex128)
    pos = 0
    for rng, chunk in zip(_worker_rngs(seed, workers), _worker_chunks(count, workers)):
        for b in _blocks(chunk):
            out[pos : pos + b] = _f_block(rng, beta, N, b)
            pos += b
    return out


def _stats(values: np.ndarray) -> SampleStats:
    count = values.size
    mean = values.mean()
    var = float(np.sum(np.abs(values - mean) ** 2)) / (count - 1)
    stderr = math.sqrt(var / count)
    if values.dtype.kind != "c":
        return SampleStats(float(mean), stderr, count)
    return SampleStats(complex(mean), stderr, count)


def _monomial(x: np.ndarray, p: MultiIndex, q: MultiIndex) -> np.ndarray:
    mono = np.ones(x.shape[0], np.complex128)
    for n, c in p.items():
        mono *= x[:, n] ** c
    for n, c in q.items():
        mono *= np.conj(x[:, n] ** c)
    return mono


def mc_x_moment(
    side: str,
    p: MultiIndex,
    q: MultiIndex,
    beta: float,
    n_trunc: int,
    samples: int,
    seed: int,
    *,
    workers: int = 1,
    dump_csv=None,
) -> SampleStats:
    """Empirical E[x^p (x^q)^*] under either the Gaussian or the alpha law.

    ``side="gaussian"`` draws the f modes and maps them through the exp(-f)
    series; ``side="alpha"`` draws coefficient sequences of length ``n_trunc``
    and uses the truncated x series.  In both cases only series coefficients
    up to the largest index occurring in (p, q) can enter the monomial, so
    the series is evaluated to that order.
    """
    if side not in ("gaussian", "alpha"):
        raise ValueError("side must be 'gaussian' or 'alpha'")
    if beta <= 0:
        raise ValueError("beta must be positive")
    if p.deg != q.deg:
        raise ValueError("p and q must have equal degree")
    if p.deg > 4:
        raise ValueError("monomial degree above 4 is not supported")
    if n_trunc < 4 * p.deg:
        raise ValueError("n_trunc must be at least four times the degree")
    if samples < 2:
        raise ValueError("need at least two samples")
    K = max([0, *p.support(), *q.support()])
    vals = np.empty(samples, np.complex128)
    pos = 0
    for rng, chunk in zip(_worker_rngs(seed, workers), _worker_chunks(samples, workers)):
        for b in _blocks(chunk):
            if side == "gaussian":
                f = _f_block(rng, beta, n_trunc, b)
                x = exp_neg_series(f[:, : K + 1])
            else:
                alphas = _alpha_block(rng, beta, n_trunc, b)
                x = szego_low_coefficients(alphas, K)
            vals[pos : pos + b] = _monomial(x, p, q)
            pos += b
    if dump_csv is not None:
        with open(dump_csv, "w", newline="") as fh:
            fh.write("# raw x-monomial samples, one row per sample\n")
            fh.write("# columns: index, real, imag\n")
            writer = csv.writer(fh)
            for i, v in enumerate(vals):
                writer.writerow([i, repr(float(v.real)), repr(float(v.imag))])
    return _stats(vals)


def mc_reference(side: str, p: MultiIndex, q: MultiIndex, beta, n_trunc: int) -> float:
    """Exact counterpart of :func:`mc_x_moment` for bias-free comparison.

    The Gaussian-side monomial has no truncation error (coefficient x_n only
    involves f_1..f_n), so the full moment applies; the alpha side is
    compared against the partial sum truncated at the same ``n_trunc``.
    """
    b = Fraction(beta)
    if side == "gaussian":
        return float(gaussian_x_moment(p, q).evaluate(b))
    if side == "alpha":
        return float(alpha_x_moment(p, q, b, n_trunc).value)
    raise ValueError("side must be 'gaussian' or 'alpha'")


def pushforward_experiment(
    beta: float,
    modes: int,
    radius: float,
    samples: int,
    max_alpha: int,
    seed: int,
    *,
    grid=None,
    workers: int = 1,
    override_beta_check: bool = False,
) -> list[SampleStats]:
    """Empirical E|alpha_n|^2 of the measure with density ∝ e^{2 Re f_+(r e^{i theta})}.

    Each sample draws f_1..f_modes, evaluates the field on a uniform theta
    grid at radius ``r``, normalizes the density, and recovers
    alpha_1..alpha_max_alpha from its trigonometric moments.  The means are
    meant to approach 1/(n beta + 1) as (modes, radius) grow; the
    approximation is deliberate and the quality must be judged by refining
    both, not assumed.  ``modes=0`` is the degenerate f = 0 path (uniform
    density, all alpha exactly zero).
    """
    if beta <= 0:
        raise ValueError("beta must be positive")
    if beta * beta >= 2:
        if not override_beta_check:
            raise ValueError(
                "beta^2 >= 2 is outside the supported range; "
                "pass override_beta_check=True to force"
            )
        warnings.warn("running with beta^2 >= 2; no convergence is expected")
    if not 0 < radius < 1:
        raise ValueError("radius must lie in (0, 1)")
    if samples < 2:
        raise ValueError("need at least two samples")
    if max_alpha < 1:
        raise ValueError("max_alpha must be >= 1")
    if grid is None:
        grid = max(1024, 4 * modes)
    if modes > 0 and grid < 4 * modes:
        raise ValueError("quadrature grid too coarse relative to modes")
    if max_alpha >= grid // 2:
        raise ValueError("quadrature grid too coarse relative to max_alpha")
    decay = radius ** np.arange(1, modes + 1)
    absq = np.empty((samples, max_alpha))
    pos = 0
    for rng, chunk in zip(_worker_rngs(seed, workers), _worker_chunks(samples, workers)):
        for b in _blocks(chunk):
            f = _f_block(rng, beta, modes, b) if modes > 0 else np.zeros((b, 1), complex)
            field = np.zeros((b, grid), np.complex128)
            if modes > 0:
                field[:, 1 : modes + 1] = f[:, 1:] * decay
            vals = np.fft.ifft(field, axis=1) * grid
            dens = np.exp(2.0 * vals.real)
            dens /= dens.mean(axis=1, keepdims=True)
            c = np.fft.fft(dens, axis=1)[:, : max_alpha + 1] / grid
            al, ok = levinson_batch(c, max_alpha)
            if not ok.all():
                bad = int((~ok).sum())
                raise ValueError(
                    f"{bad} sample(s) gave non-positive-definite moments; refine the grid"
                )
            absq[pos : pos + b] = np.abs(al) ** 2
            pos += b
    return [_stats(absq[:, n]) for n in range(max_alpha)]
