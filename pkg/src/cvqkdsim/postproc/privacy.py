"""Toeplitz-matrix privacy amplification over GF(2).

The hash matrix T (out_len x n) is defined by T[i, j] = r[i + n - 1 - j]
with r a seeded random bit string of length out_len + n - 1, so the
product T x mod 2 is a slice of the binary convolution r * x.  Small
products are evaluated with exact integer convolution; large ones use an
FFT convolution whose result is validated to be integral before reduction.
"""

from __future__ import annotations

import numpy as np
from scipy.signal import fftconvolve

_DIRECT_LIMIT = 5e7   # n*out_len above which FFT convolution is used


def privacy_amplify(bits, seed: int, out_len: int) -> np.ndarray:
    """Compress a bit sequence to out_len bits by seeded Toeplitz hashing."""
    bits = np.asarray(bits, dtype=np.uint8)
    n = len(bits)
    if out_len < 0:
        raise ValueError("out_len must be >= 0")
    if out_len > n:
        raise ValueError(f"out_len {out_len} exceeds input length {n}")
    if out_len == 0:
        return np.zeros(0, dtype=np.uint8)
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
    r = rng.integers(0, 2, size=n + out_len - 1, dtype=np.int64)
    x = bits.astype(np.int64)
    if n * out_len <= _DIRECT_LIMIT:
        conv = np.convolve(r, x)
    else:
        conv = fftconvolve(r.astype(np.float64), x.astype(np.float64))
        rounded = np.rint(conv)
        if np.max(np.abs(conv - rounded)) > 0.1:
            raise RuntimeError("FFT convolution lost integrality")
        conv = rounded.astype(np.int64)
    return (conv[n - 1: n - 1 + out_len] & 1).astype(np.uint8)
