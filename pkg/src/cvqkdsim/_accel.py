"""Hot numeric kernels: numba-compiled with a pure-numpy fallback.

The backend is chosen once at import: numba when importable, unless the
environment variable CVQKDSIM_NO_NUMBA is set to 1/true/yes.  Both paths
implement the same flooding-schedule sum-product decoder; results agree
up to floating-point summation order.  `bench/bp_benchmark.py` compares
their throughput.
"""

from __future__ import annotations

import os

import numpy as np

_ENV_DISABLED = os.environ.get("CVQKDSIM_NO_NUMBA", "").strip().lower() in ("1", "true", "yes")

try:  # pragma: no cover - import guard
    if _ENV_DISABLED:
        raise ImportError("numba disabled by CVQKDSIM_NO_NUMBA")
    from numba import njit

    NUMBA_AVAILABLE = True
except ImportError:  # pragma: no cover
    NUMBA_AVAILABLE = False

    def njit(*args, **kwargs):
        def wrap(f):
            return f
        if args and callable(args[0]):
            return args[0]
        return wrap


def backend() -> str:
    return "numba" if NUMBA_AVAILABLE else "numpy"


LLR_CLAMP = 40.0
_TANH_CAP = 1.0 - 1e-15


@njit(cache=True)
def _bp_decode_numba(llr, check_ptr, edge_var, syndrome, max_iters):  # pragma: no cover
    n = llr.shape[0]
    m = check_ptr.shape[0] - 1
    n_edges = edge_var.shape[0]

    c2v = np.zeros(n_edges)
    v2c = np.empty(n_edges)
    vsum = np.empty(n)
    fwd = np.empty(64)
    bits = np.zeros(n, dtype=np.uint8)

    for it in range(max_iters):
        # variable -> check
        for v in range(n):
            vsum[v] = llr[v]
        for e in range(n_edges):
            vsum[edge_var[e]] += c2v[e]
        for e in range(n_edges):
            x = vsum[edge_var[e]] - c2v[e]
            if x > LLR_CLAMP:
                x = LLR_CLAMP
            elif x < -LLR_CLAMP:
                x = -LLR_CLAMP
            v2c[e] = x
        # check -> variable (forward/backward partial products)
        for c in range(m):
            start = check_ptr[c]
            end = check_ptr[c + 1]
            deg = end - start
            sign_c = 1.0 - 2.0 * syndrome[c]
            fwd[0] = sign_c
            for k in range(deg):
                fwd[k + 1] = fwd[k] * np.tanh(0.5 * v2c[start + k])
            bwd = 1.0
            for k in range(deg - 1, -1, -1):
                prod = fwd[k] * bwd
                if prod > _TANH_CAP:
                    prod = _TANH_CAP
                elif prod < -_TANH_CAP:
                    prod = -_TANH_CAP
                c2v[start + k] = 2.0 * np.arctanh(prod)
                bwd *= np.tanh(0.5 * v2c[start + k])
        # posterior and hard decision
        for v in range(n):
            vsum[v] = llr[v]
        for e in range(n_edges):
            vsum[edge_var[e]] += c2v[e]
        for v in range(n):
            bits[v] = 1 if vsum[v] < 0.0 else 0
        # syndrome check
        ok = True
        for c in range(m):
            acc = 0
            for e in range(check_ptr[c], check_ptr[c + 1]):
                acc ^= bits[edge_var[e]]
            if acc != syndrome[c]:
                ok = False
                break
        if ok:
            return bits, True, it + 1
    return bits, False, max_iters


def _bp_decode_numpy(llr, check_ptr, edge_var, syndrome, max_iters):
    n = llr.shape[0]
    n_edges = edge_var.shape[0]
    check_of_edge = np.repeat(np.arange(len(check_ptr) - 1), np.diff(check_ptr))
    sign_c = 1.0 - 2.0 * syndrome.astype(np.float64)

    c2v = np.zeros(n_edges)
    for it in range(max_iters):
        vsum = llr + np.bincount(edge_var, weights=c2v, minlength=n)
        v2c = np.clip(vsum[edge_var] - c2v, -LLR_CLAMP, LLR_CLAMP)

        t = np.tanh(0.5 * v2c)
        at = np.clip(np.abs(t), 1e-300, None)
        logt = np.log(at)
        neg = (t < 0).astype(np.int64)
        seg_log = np.add.reduceat(logt, check_ptr[:-1])
        seg_neg = np.add.reduceat(neg, check_ptr[:-1])
        mag = np.exp(seg_log[check_of_edge] - logt)
        par = (seg_neg[check_of_edge] - neg + syndrome[check_of_edge]) & 1
        prod = np.clip(np.where(par == 1, -mag, mag), -_TANH_CAP, _TANH_CAP)
        c2v = 2.0 * np.arctanh(prod)

        post = llr + np.bincount(edge_var, weights=c2v, minlength=n)
        bits = (post < 0.0).astype(np.uint8)
        syn = np.bitwise_and(np.add.reduceat(bits[edge_var].astype(np.int64),
                                             check_ptr[:-1]), 1).astype(np.uint8)
        if np.array_equal(syn, syndrome):
            return bits, True, it + 1
    return bits, False, max_iters


def bp_decode_kernel(llr, check_ptr, edge_var, syndrome, max_iters,
                     force_backend: str | None = None):
    """Syndrome-formulation sum-product decode; returns (bits, converged, iters)."""
    llr = np.ascontiguousarray(llr, dtype=np.float64)
    check_ptr = np.ascontiguousarray(check_ptr, dtype=np.int64)
    edge_var = np.ascontiguousarray(edge_var, dtype=np.int64)
    syndrome = np.ascontiguousarray(syndrome, dtype=np.uint8)
    use = force_backend or backend()
    if use == "numba" and not NUMBA_AVAILABLE:
        raise RuntimeError("numba backend requested but numba is unavailable")
    if use == "numba":
        return _bp_decode_numba(llr, check_ptr, edge_var, syndrome, int(max_iters))
    return _bp_decode_numpy(llr, check_ptr, edge_var, syndrome, int(max_iters))
