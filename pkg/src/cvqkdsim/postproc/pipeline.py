"""End-to-end secret-key extraction from heterodyne symbol records.

Reverse reconciliation: Bob's sign bits are the reference.  Per frame,
Bob draws uniform bits, publishes the multidimensional mapping messages
and block norms plus the LDPC syndrome of his bits, and Alice decodes her
rotated, LLR-weighted observations toward that syndrome.  Surviving
frames are concatenated and compressed by Toeplitz hashing to the length
given by the secret key fraction at the measured parameters.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..estimation import SymbolRecords, estimate_params, snr_per_dimension
from ..rng import RandomStream
from ..security import SecurityParams, secret_key_fraction, with_measured
from .ldpc import LdpcCode, bp_decode, ldpc_syndrome
from .multidim import apply_map, bits_to_unit_vectors, compute_llrs, multidim_map
from .privacy import privacy_amplify


@dataclass(frozen=True)
class KeyResult:
    frames_total: int
    frames_failed: int
    frames_undetected: int
    fer: float
    leaked_bits: int
    final_key: np.ndarray
    skf: float                    # bits/symbol, clamped at 0
    skf_raw: float
    beta_achieved: float
    i_ab: float
    chi_eb: float
    T_eff: float
    xi_hat: float
    mean_iters: float
    keys_match: bool


def _per_detector_stream(records: SymbolRecords):
    """Interleave (q, p) per symbol into real streams in per-detector units."""
    if records.detection != "heterodyne":
        raise ValueError("key pipeline requires heterodyne records")
    bob = np.asarray(records.bob) / np.sqrt(2.0)   # input-referred -> per-detector
    alice = np.asarray(records.alice)
    xa = np.empty(2 * len(alice))
    xb = np.empty(2 * len(bob))
    xa[0::2], xa[1::2] = alice.real, alice.imag
    xb[0::2], xb[1::2] = bob.real, bob.imag
    return xa, xb


def key_pipeline(records: SymbolRecords, code: LdpcCode, d: int,
                 params: SecurityParams, rng: RandomStream,
                 max_iters: int = 200, v_mod: Optional[float] = None) -> KeyResult:
    """Run estimation, reconciliation, and privacy amplification.

    The first nu_pe fraction of symbols is reserved for parameter
    estimation; the remainder is carved into d-blocks and LDPC frames.
    """
    v_mod = params.v_mod if v_mod is None else v_mod
    n_total = len(records)
    n_pe = int(round(params.nu_pe * n_total))
    if n_pe < 1000:
        raise ValueError("not enough symbols reserved for parameter estimation")
    est = estimate_params(records.subset(slice(0, n_pe)), v_mod, v_el=params.v_el)

    xa, xb = _per_detector_stream(records.subset(slice(n_pe, n_total)))
    n_blocks_all = len(xb) // d
    blocks_per_frame = code.n // d
    if code.n % d != 0:
        raise ValueError("code length must be a multiple of the block dimension")
    n_frames = n_blocks_all // blocks_per_frame
    if n_frames < 1:
        raise ValueError("not enough symbols for a single reconciliation frame")

    # virtual-channel calibration from estimated parameters
    t_half = est.t_hat / np.sqrt(2.0)
    sigma_z2 = max(est.v_b - t_half ** 2 * v_mod, 1e-9)
    noise_var_effective = sigma_z2 / t_half

    g = rng.generator
    frames_failed = 0
    frames_undetected = 0
    good_alice = []
    good_bob = []
    iters_hist = []
    for fi in range(n_frames):
        lo = fi * blocks_per_frame * d
        hi = lo + blocks_per_frame * d
        y = xb[lo:hi].reshape(blocks_per_frame, d)
        x = xa[lo:hi].reshape(blocks_per_frame, d)
        norms = np.linalg.norm(y, axis=-1)
        if np.any(norms == 0):
            frames_failed += 1      # degenerate block: frame discarded
            continue
        bob_bits = g.integers(0, 2, size=code.n, dtype=np.uint8)
        u = bits_to_unit_vectors(bob_bits.reshape(blocks_per_frame, d), d)
        msgs = multidim_map(y, u, d)
        syndrome = ldpc_syndrome(code, bob_bits)

        v = apply_map(msgs, x)
        llrs = compute_llrs(v, norms, noise_var_effective).ravel()
        decoded, converged, iters = bp_decode(code, llrs, syndrome, max_iters=max_iters)
        iters_hist.append(iters)
        if not converged:
            frames_failed += 1
            continue
        if not np.array_equal(decoded, bob_bits):
            frames_failed += 1
            frames_undetected += 1
            continue
        good_alice.append(decoded)
        good_bob.append(bob_bits)

    fer = frames_failed / n_frames
    snr = snr_per_dimension(est, v_mod)
    capacity_dim = 0.5 * np.log2(1.0 + snr)
    beta_achieved = code.rate / capacity_dim if capacity_dim > 0 else 0.0

    measured = with_measured(params, est.T_eff, est.xi_hat, fer, min(beta_achieved, 1.0))
    kf = secret_key_fraction(measured)
    leaked_bits = n_frames * code.m

    if good_bob:
        alice_bits = np.concatenate(good_alice)
        bob_bits_all = np.concatenate(good_bob)
        out_len = min(int(kf.clamped * n_total), len(bob_bits_all))
        pa_seed = int(g.integers(0, 2 ** 62))
        key_bob = privacy_amplify(bob_bits_all, pa_seed, out_len)
        key_alice = privacy_amplify(alice_bits, pa_seed, out_len)
        keys_match = bool(np.array_equal(key_bob, key_alice))
    else:
        key_bob = np.zeros(0, dtype=np.uint8)
        keys_match = True

    return KeyResult(
        frames_total=n_frames, frames_failed=frames_failed,
        frames_undetected=frames_undetected, fer=fer, leaked_bits=leaked_bits,
        final_key=key_bob, skf=kf.clamped if keys_match else 0.0,
        skf_raw=kf.raw, beta_achieved=beta_achieved, i_ab=kf.i_ab,
        chi_eb=kf.chi_eb, T_eff=est.T_eff, xi_hat=est.xi_hat,
        mean_iters=float(np.mean(iters_hist)) if iters_hist else 0.0,
        keys_match=keys_match)
