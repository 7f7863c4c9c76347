"""Batched hot kernels for the Monte Carlo lane: numba with a numpy fallback.

Each kernel exists twice: a scalar-loop version compiled with ``numba.njit``
and a vectorized pure-numpy version.  The active backend is chosen once at
import: setting ``VERBLUNSKY_PURE_NUMPY=1`` (or numba being unavailable)
selects the numpy path.  Both implementations stay importable so tests and
the benchmark script can compare them directly.

Kernels:

* ``szego_low_coefficients`` — first K+1 coefficients of the reversed
  polynomial for a batch of coefficient sequences.  For sequences longer than
  K it tracks only the K+1 lowest and K+1 highest coefficients (the recursion
  couples low[j] to top[j-1]), giving O(N K) per sample instead of O(N^2).
* ``exp_neg_series`` — x = exp(-f) series coefficients for a batch of f rows.
* ``levinson_batch`` — Verblunsky coefficients from trigonometric moments for
  a batch of moment rows, with per-sample positive-definiteness flags.
"""

from __future__ import annotations

import os

import numpy as np

_env = os.environ.get("VERBLUNSKY_PURE_NUMPY", "").strip()
FORCE_NUMPY = _env not in ("", "0")

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a hard dep, but stay importable
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]

        def wrap(fn):
            return fn

        return wrap


USE_NUMBA = HAVE_NUMBA and not FORCE_NUMPY


def backend_name() -> str:
    return "numba" if USE_NUMBA else "numpy"


# -- reversed-polynomial low coefficients ----------------------------------


@njit(cache=True)
def _szego_low_nb(alphas: np.ndarray, K: int) -> np.ndarray:  # pragma: no cover
    S, N = alphas.shape
    out = np.zeros((S, K + 1), np.complex128)
    n0 = min(N, K)
    r = np.zeros(K + 1, np.complex128)
    tmp = np.zeros(K + 1, np.complex128)
    top = np.zeros(K + 1, np.complex128)
    ttmp = np.zeros(K + 1, np.complex128)
    for s in range(S):
        for k in range(K + 1):
            r[k] = 0.0
        r[0] = 1.0
        for n in range(1, n0 + 1):
            a = alphas[s, n - 1]
            for k in range(n + 1):
                tmp[k] = r[k] + a * np.conj(r[n - k])
            for k in range(n + 1):
                r[k] = tmp[k]
        if N > K:
            for i in range(K + 1):
                top[i] = r[K - i]
            for n in range(K + 1, N + 1):
                a = alphas[s, n - 1]
                tmp[0] = r[0]
                for j in range(1, K + 1):
                    tmp[j] = r[j] + a * np.conj(top[j - 1])
                ttmp[0] = a * np.conj(r[0])
                for i in range(1, K + 1):
                    ttmp[i] = top[i - 1] + a * np.conj(r[i])
                for k in range(K + 1):
                    r[k] = tmp[k]
                    top[k] = ttmp[k]
        for k in range(K + 1):
            out[s, k] = r[k]
    return out


def _szego_low_np(alphas: np.ndarray, K: int) -> np.ndarray:
    S, N = alphas.shape
    n0 = min(N, K)
    r = np.zeros((S, K + 1), np.complex128)
    r[:, 0] = 1.0
    for n in range(1, n0 + 1):
        a = alphas[:, n - 1][:, None]
        sub = r[:, : n + 1]
        r[:, : n + 1] = sub + a * np.conj(sub[:, ::-1])
    if N > K:
        top = r[:, ::-1].copy()
        low = r
        for n in range(K + 1, N + 1):
            a = alphas[:, n - 1][:, None]
            new_low = low.copy()
            new_low[:, 1:] += a[:, 0][:, None] * np.conj(top[:, :-1])
            new_top = np.empty_like(top)
            new_top[:, :1] = a * np.conj(low[:, :1])
            new_top[:, 1:] = top[:, :-1] + a * np.conj(low[:, 1:])
            low, top = new_low, new_top
        return low
    return r


def szego_low_coefficients(alphas: np.ndarray, K: int) -> np.ndarray:
    """(S, K+1) low coefficients of r_N per sample row of alphas (S, N)."""
    alphas = np.ascontiguousarray(alphas, dtype=np.complex128)
    if alphas.ndim != 2:
        raise ValueError("alphas must be a (samples, N) array")
    if USE_NUMBA:
        return _szego_low_nb(alphas, K)
    return _szego_low_np(alphas, K)


# -- exp(-f) series --------------------------------------------------------


@njit(cache=True)
def _exp_neg_nb(f: np.ndarray) -> np.ndarray:  # pragma: no cover
    S, L = f.shape
    y = np.zeros((S, L), np.complex128)
    for s in range(S):
        y[s, 0] = 1.0
        for k in range(1, L):
            acc = 0.0 + 0.0j
            for j in range(1, k + 1):
                acc += (j / k) * (-f[s, j]) * y[s, k - j]
            y[s, k] = acc
    return y


def _exp_neg_np(f: np.ndarray) -> np.ndarray:
    S, L = f.shape
    g = -f
    y = np.zeros((S, L), np.complex128)
    y[:, 0] = 1.0
    for k in range(1, L):
        j = np.arange(1, k + 1)
        y[:, k] = np.sum(g[:, 1 : k + 1] * (j / k) * y[:, k - 1 :: -1][:, :k], axis=1)
    return y


def exp_neg_series(f: np.ndarray) -> np.ndarray:
    """x = exp(-f) coefficients per row; f[:, 0] must be zero."""
    f = np.ascontiguousarray(f, dtype=np.complex128)
    if f.ndim != 2:
        raise ValueError("f must be a (samples, modes+1) array")
    if f.shape[1] and np.abs(f[:, 0]).max() > 1e-12:
        raise ValueError("constant terms must vanish")
    if USE_NUMBA:
        return _exp_neg_nb(f)
    return _exp_neg_np(f)


# -- batched Levinson ------------------------------------------------------


@njit(cache=True)
def _levinson_nb(c: np.ndarray, K: int):  # pragma: no cover
    S = c.shape[0]
    out = np.zeros((S, K), np.complex128)
    ok = np.ones(S, np.bool_)
    p = np.zeros(K + 1, np.complex128)
    pn = np.zeros(K + 1, np.complex128)
    for s in range(S):
        for k in range(K + 1):
            p[k] = 0.0
        p[0] = 1.0
        energy = c[s, 0].real
        if energy <= 0:
            ok[s] = False
            continue
        for n in range(1, K + 1):
            inner = 0.0 + 0.0j
            for k in range(n):
                inner += p[k] * np.conj(c[s, k + 1])
            a_star = -inner / energy
            aa = a_star.real * a_star.real + a_star.imag * a_star.imag
            if aa >= 1.0:
                ok[s] = False
                break
            energy = energy * (1.0 - aa)
            if energy <= 0:
                ok[s] = False
                break
            out[s, n - 1] = np.conj(a_star)
            for k in range(n + 1):
                v = p[k - 1] if k >= 1 else 0.0 + 0.0j
                w = np.conj(p[n - 1 - k]) if n - 1 - k >= 0 else 0.0 + 0.0j
                pn[k] = v + a_star * w
            for k in range(n + 1):
                p[k] = pn[k]
    return out, ok


def _levinson_np(c: np.ndarray, K: int):
    S = c.shape[0]
    out = np.zeros((S, K), np.complex128)
    ok = np.ones(S, bool)
    p = np.zeros((S, K + 1), np.complex128)
    p[:, 0] = 1.0
    energy = c[:, 0].real.copy()
    ok &= energy > 0
    safe = np.where(energy > 0, energy, 1.0)
    for n in range(1, K + 1):
        inner = np.sum(p[:, :n] * np.conj(c[:, 1 : n + 1]), axis=1)
        a_star = -inner / safe
        aa = np.abs(a_star) ** 2
        ok &= aa < 1.0
        energy = energy * (1.0 - aa)
        ok &= energy > 0
        safe = np.where(energy > 0, energy, 1.0)
        out[:, n - 1] = np.conj(a_star)
        pn = np.zeros_like(p)
        pn[:, 1 : n + 1] = p[:, :n]
        pn[:, :n] += a_star[:, None] * np.conj(p[:, n - 1 :: -1][:, :n])
        p = pn
    return out, ok


def levinson_batch(c: np.ndarray, K: int):
    """Per-row Verblunsky recovery from moments c (S, >= K+1).

    Returns (alphas (S, K), ok (S,)); rows with a positive-definiteness
    failure are flagged False and their coefficients are unspecified.
    """
    c = np.ascontiguousarray(c, dtype=np.complex128)
    if c.ndim != 2 or c.shape[1] < K + 1:
        raise ValueError("need a (samples, >= K+1) moment array")
    if USE_NUMBA:
        return _levinson_nb(c, K)
    return _levinson_np(c, K)
