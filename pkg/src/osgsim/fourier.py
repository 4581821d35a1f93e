"""Radix-2 iterative complex FFT with physical momentum labeling.

Self-contained transform used by the grid propagator.  Sizes are powers of
two and small (typically 4096), so an iterative Cooley-Tukey with cached
bit-reversal permutations and per-stage twiddle tables is plenty fast; the
butterflies are vectorized over any leading axes so both dressed branches
transform in a single call.

Conventions (matching the usual continuum transform pair):

    forward:  F[j] = Σ_k a[k] exp(-2πi j k / n)
    inverse:  a[k] = (1/n) Σ_j F[j] exp(+2πi j k / n)
"""

from __future__ import annotations

import numpy as np

_PLANS: dict[tuple[int, bool], tuple[np.ndarray, list[np.ndarray]]] = {}


def _plan(n: int, inverse: bool):
    """Bit-reversal permutation and twiddle tables for size n."""
    try:
        return _PLANS[(n, inverse)]
    except KeyError:
        pass
    if n < 2 or n & (n - 1):
        raise ValueError(f"transform size must be a power of two >= 2, got {n}")
    bits = n.bit_length() - 1
    perm = np.zeros(n, dtype=np.intp)
    for i in range(n):
        r = 0
        x = i
        for _ in range(bits):
            r = (r << 1) | (x & 1)
            x >>= 1
        perm[i] = r
    sign = 2j if inverse else -2j
    stages = []
    half = 1
    while half < n:
        stages.append(np.exp(sign * np.pi * np.arange(half) / (2 * half)))
        half *= 2
    plan = (perm, stages)
    _PLANS[(n, inverse)] = plan
    return plan


def _transform(a: np.ndarray, inverse: bool) -> np.ndarray:
    a = np.asarray(a, dtype=np.complex128)
    n = a.shape[-1]
    perm, stages = _plan(n, inverse)
    out = np.ascontiguousarray(a[..., perm])
    scratch = np.empty_like(out)
    half = 1
    for w in stages:
        v = out.reshape(out.shape[:-1] + (n // (2 * half), 2, half))
        even = v[..., 0, :]
        odd = v[..., 1, :]
        s = scratch.reshape(v.shape)[..., 0, :]
        np.multiply(odd, w, out=odd)          # odd *= twiddle
        np.subtract(even, odd, out=s)         # s    = even - odd
        np.add(even, odd, out=even)           # even = even + odd
        odd[...] = s
        half *= 2
    if inverse:
        out *= 1.0 / n
    return out


def fft(a: np.ndarray) -> np.ndarray:
    """Forward DFT along the last axis (length must be a power of two)."""
    return _transform(a, inverse=False)


def ifft(a: np.ndarray) -> np.ndarray:
    """Inverse DFT along the last axis."""
    return _transform(a, inverse=True)


def momentum_grid(n: int, dxi: float) -> np.ndarray:
    """Momenta q_j conjugate to an n-point grid of spacing dxi, DFT order.

    q_j = 2π j/(n dxi) for j < n/2, then the negative frequencies;
    q ranges over [-π/dxi, π/dxi).
    """
    j = np.arange(n)
    j = np.where(j < n // 2, j, j - n)
    return 2 * np.pi * j / (n * dxi)
