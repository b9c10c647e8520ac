"""Multidimensional reconciliation over the real division algebras.

Gaussian values are grouped into d-vectors (d in {1, 2, 4, 8}) and mapped
onto the unit sphere: Bob picks uniform sign vectors u with entries
+-1/sqrt(d) and publishes the rotation M = u o (y/||y||)^-1 (division-
algebra multiplication) that takes his normalized block to u.  Left
multiplication by a unit element is an isometry, and for i.i.d. Gaussian
noise the induced virtual channel on each dimension is binary-input AWGN.

Vectors are batched: arrays of shape (..., d) with the algebra acting on
the last axis.
"""

from __future__ import annotations

import numpy as np

DIMENSIONS = (1, 2, 4, 8)


def _check_dim(d: int):
    if d not in DIMENSIONS:
        raise ValueError(f"dimension must be one of {DIMENSIONS}, got {d}")


def cd_conj(x: np.ndarray) -> np.ndarray:
    """Cayley-Dickson conjugate on the last axis."""
    out = -np.asarray(x, dtype=float).copy()
    out[..., 0] = -out[..., 0]
    return out


def cd_mult(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Cayley-Dickson product (a, b broadcastable, last axis = algebra dim)."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    d = a.shape[-1]
    if d == 1:
        return a * b
    h = d // 2
    a1, a2 = a[..., :h], a[..., h:]
    b1, b2 = b[..., :h], b[..., h:]
    # (a1, a2)(b1, b2) = (a1 b1 - b2* a2, b2 a1 + a2 b1*)
    lo = cd_mult(a1, b1) - cd_mult(cd_conj(b2), a2)
    hi = cd_mult(b2, a1) + cd_mult(a2, cd_conj(b1))
    return np.concatenate([lo, hi], axis=-1)


def cd_inverse(x: np.ndarray) -> np.ndarray:
    """Multiplicative inverse conj(x)/||x||^2."""
    x = np.asarray(x, dtype=float)
    norm2 = np.sum(x * x, axis=-1, keepdims=True)
    return cd_conj(x) / norm2


def multidim_map(y: np.ndarray, u: np.ndarray, d: int) -> np.ndarray:
    """Mapping message M = u o (y/||y||)^-1 taking y/||y|| to u.

    y: (..., d) Gaussian blocks with nonzero norm; u: (..., d) with entries
    +-1/sqrt(d).  The returned M is a unit algebra element per block.
    """
    _check_dim(d)
    y = np.asarray(y, dtype=float)
    u = np.asarray(u, dtype=float)
    norms = np.linalg.norm(y, axis=-1, keepdims=True)
    if np.any(norms == 0):
        raise ValueError("zero-norm block cannot be mapped")
    ybar = y / norms
    return cd_mult(u, cd_inverse(ybar))


def apply_map(m: np.ndarray, w: np.ndarray) -> np.ndarray:
    """Apply a mapping message by left multiplication."""
    return cd_mult(m, w)


def compute_llrs(v: np.ndarray, y_norm, noise_var_effective: float) -> np.ndarray:
    """BIAWGN-equivalent LLRs for the bits behind u.

    v is Alice's rotated block (..., d); y_norm the matching block norms.
    Positive LLR means bit 0 (u_i = +1/sqrt(d)) more likely.
    """
    if noise_var_effective <= 0:
        raise ValueError("noise_var_effective must be > 0")
    v = np.asarray(v, dtype=float)
    d = v.shape[-1]
    y_norm = np.asarray(y_norm, dtype=float)
    if y_norm.ndim == v.ndim - 1:
        y_norm = y_norm[..., None]
    return 2.0 * v * y_norm / (np.sqrt(d) * noise_var_effective)


def bits_to_unit_vectors(bits: np.ndarray, d: int) -> np.ndarray:
    """(..., d) bit blocks -> sign vectors with entries +-1/sqrt(d); bit 0 -> +."""
    _check_dim(d)
    bits = np.asarray(bits)
    return (1.0 - 2.0 * bits.astype(float)) / np.sqrt(d)
