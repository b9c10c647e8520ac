"""Gaussian quantum-information calculus for the secret key fraction.

Covariance matrices are 2N x 2N real symmetric arrays in SNU with
quadrature ordering (q1, p1, ..., qN, pN) and vacuum variance 1.  The
Holevo bound chi_EB is evaluated in the entanglement-based picture with a
trusted detector: Eve purifies the channel only, and the detector
(efficiency eta, electronic noise v_el) is modeled as a beamsplitter that
mixes Bob's mode with one arm of an EPR pair of variance
v_d = 1 + v_el/(1 - eta).  Entropies are in bits.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Tuple

import numpy as np

SYMMETRY_TOL = 1e-12
PHYSICALITY_TOL = 1e-9
ETA_ONE_EPSILON = 1e-6   # limiting beamsplitter for eta = 1 with v_el > 0

DETECTIONS = ("homodyne", "heterodyne")


class UnphysicalStateError(ValueError):
    pass


class DegenerateMeasurementError(ValueError):
    pass


@dataclass(frozen=True)
class SecurityParams:
    v_mod: float
    T: float
    xi: float = 0.0
    eta: float = 1.0
    v_el: float = 0.0
    detection: str = "homodyne"
    beta: float = 1.0
    nu_pe: float = 0.0
    fer: float = 0.0

    def __post_init__(self):
        if self.v_mod < 0:
            raise ValueError("v_mod must be >= 0")
        if not 0.0 < self.T <= 1.0:
            raise ValueError("T must be in (0, 1]")
        if self.xi < 0:
            raise ValueError("xi must be >= 0")
        if not 0.0 < self.eta <= 1.0:
            raise ValueError("eta must be in (0, 1]")
        if self.v_el < 0:
            raise ValueError("v_el must be >= 0")
        if self.detection not in DETECTIONS:
            raise ValueError(f"detection must be one of {DETECTIONS}")
        if not 0.0 < self.beta <= 1.0:
            raise ValueError("beta must be in (0, 1]")
        if not 0.0 <= self.nu_pe < 1.0:
            raise ValueError("nu_pe must be in [0, 1)")
        if not 0.0 <= self.fer <= 1.0:
            raise ValueError("fer must be in [0, 1]")


def omega(n_modes: int) -> np.ndarray:
    """Standard symplectic form for n modes."""
    o = np.zeros((2 * n_modes, 2 * n_modes))
    for k in range(n_modes):
        o[2 * k, 2 * k + 1] = 1.0
        o[2 * k + 1, 2 * k] = -1.0
    return o


def g_entropy(nu: float) -> float:
    """Bosonic entropy kernel g(nu) in bits; g(1) = 0 by continuity."""
    if nu < 1.0 - 1e-6:
        raise UnphysicalStateError(f"symplectic eigenvalue {nu} < 1")
    nu = max(nu, 1.0)
    if nu == 1.0:
        return 0.0
    up = (nu + 1.0) / 2.0
    dn = (nu - 1.0) / 2.0
    return float(up * np.log2(up) - dn * np.log2(dn))


def symplectic_eigenvalues(sigma: np.ndarray) -> np.ndarray:
    """Symplectic spectrum: |eig(i Omega Sigma)| deduplicated to N values."""
    sigma = np.asarray(sigma, dtype=float)
    if sigma.ndim != 2 or sigma.shape[0] != sigma.shape[1] or sigma.shape[0] % 2:
        raise ValueError(f"covariance matrix must be 2N x 2N, got {sigma.shape}")
    scale = max(np.abs(sigma).max(), 1.0)
    if np.abs(sigma - sigma.T).max() > SYMMETRY_TOL * scale:
        raise ValueError("covariance matrix is not symmetric")
    n = sigma.shape[0] // 2
    ev = np.linalg.eigvals(1j * omega(n) @ sigma)
    # eigenvalues come in +-nu pairs: sort |.| and take every other one
    mags = np.sort(np.abs(ev))
    nus = mags[::2][:n][::-1].copy()
    if np.any(nus < 1.0 - PHYSICALITY_TOL):
        raise UnphysicalStateError(
            f"symplectic eigenvalues below 1: {nus[nus < 1.0 - PHYSICALITY_TOL]}")
    return np.sort(nus)[::-1]


def is_physical(sigma: np.ndarray, tol: float = PHYSICALITY_TOL) -> bool:
    try:
        nus = symplectic_eigenvalues(sigma)
    except UnphysicalStateError:
        return False
    return bool(np.all(nus >= 1.0 - tol))


def entropy(sigma: np.ndarray) -> float:
    """Von Neumann entropy in bits: sum of g over the symplectic spectrum."""
    return float(sum(g_entropy(nu) for nu in symplectic_eigenvalues(sigma)))


def beamsplitter(sigma: np.ndarray, mode_a: int, mode_b: int, tau: float) -> np.ndarray:
    """Symplectic congruence by a two-mode beamsplitter of transmittance tau."""
    sigma = np.asarray(sigma, dtype=float)
    n = sigma.shape[0] // 2
    if not 0.0 <= tau <= 1.0:
        raise ValueError("tau must be in [0, 1]")
    if mode_a == mode_b or not (0 <= mode_a < n and 0 <= mode_b < n):
        raise ValueError("beamsplitter needs two distinct valid mode indices")
    s = np.eye(2 * n)
    t, r = np.sqrt(tau), np.sqrt(1.0 - tau)
    for k in range(2):
        i, j = 2 * mode_a + k, 2 * mode_b + k
        s[i, i] = t
        s[i, j] = r
        s[j, i] = -r
        s[j, j] = t
    return s @ sigma @ s.T


def _split_blocks(sigma: np.ndarray, mode: int):
    n2 = sigma.shape[0]
    idx = [2 * mode, 2 * mode + 1]
    keep = [i for i in range(n2) if i not in idx]
    a = sigma[np.ix_(keep, keep)]
    b = sigma[np.ix_(idx, idx)]
    c = sigma[np.ix_(keep, idx)]
    return a, b, c


def measure_mode(sigma: np.ndarray, mode: int, kind: str) -> np.ndarray:
    """Conditional covariance of the remaining modes after measuring one mode.

    homodyne_q uses the Schur complement with the q-projector pseudo-inverse;
    heterodyne uses (Sigma_B + I)^-1.
    """
    sigma = np.asarray(sigma, dtype=float)
    if sigma.shape[0] < 4:
        raise ValueError("need at least 2 modes to measure one")
    a, b, c = _split_blocks(sigma, mode)
    if kind == "heterodyne":
        return a - c @ np.linalg.inv(b + np.eye(2)) @ c.T
    if kind in ("homodyne_q", "homodyne_p"):
        j = 0 if kind == "homodyne_q" else 1
        if b[j, j] <= 0:
            raise DegenerateMeasurementError("measured quadrature has zero variance")
        pinv = np.zeros((2, 2))
        pinv[j, j] = 1.0 / b[j, j]
        return a - c @ pinv @ c.T
    raise ValueError(f"unknown measurement kind {kind}")


def two_mode_epr(v: float) -> np.ndarray:
    """Two-mode squeezed vacuum covariance of variance v >= 1."""
    if v < 1.0:
        raise ValueError("EPR variance must be >= 1")
    cz = np.sqrt(v * v - 1.0)
    sz = np.diag([1.0, -1.0])
    return np.block([[v * np.eye(2), cz * sz], [cz * sz, v * np.eye(2)]])


def build_link_state(p: SecurityParams) -> Tuple[np.ndarray, np.ndarray, int]:
    """Entanglement-based covariance matrices for the link.

    Returns (sigma_AB1, sigma_full, bob_mode_index): sigma_AB1 is the
    two-mode state after the channel (Eve's purification boundary);
    sigma_full adds the trusted detector model over modes
    (A, B_detected, F_loss, G_twin) with the detected mode at index 1.
    """
    v = p.v_mod + 1.0
    b = p.T * (v - 1.0) + 1.0 + p.T * p.xi
    c = np.sqrt(p.T * (v * v - 1.0))
    sz = np.diag([1.0, -1.0])
    sigma_ab1 = np.block([[v * np.eye(2), c * sz], [c * sz, b * np.eye(2)]])
    if not is_physical(sigma_ab1):
        raise UnphysicalStateError("channel output state is unphysical")

    eta = p.eta
    if eta >= 1.0:
        if p.v_el == 0.0:
            eta_eff, v_d = 1.0, 1.0
        else:
            eta_eff, v_d = 1.0 - ETA_ONE_EPSILON, 1.0 + p.v_el / ETA_ONE_EPSILON
    else:
        eta_eff, v_d = eta, 1.0 + p.v_el / (1.0 - eta)

    sigma_full = np.zeros((8, 8))
    sigma_full[:4, :4] = sigma_ab1
    sigma_full[4:, 4:] = two_mode_epr(v_d)
    # detector beamsplitter: mode 1 (B1) mixed with mode 2 (EPR arm F)
    sigma_full = beamsplitter(sigma_full, 1, 2, eta_eff)
    return sigma_ab1, sigma_full, 1


def holevo_bound(p: SecurityParams) -> float:
    """Holevo bound chi_EB on Eve's information about Bob's outcomes.

    chi = S(E) - S(E|B).  With Eve purifying the channel, S(E) equals the
    entropy of the channel output state; after Bob's (rank-one Gaussian)
    measurement the global state stays pure, so S(E|B) equals the entropy
    of the conditional state of all trusted modes.
    """
    if p.v_mod == 0.0:
        return 0.0
    sigma_ab1, sigma_full, bob_mode = build_link_state(p)
    s_e = entropy(sigma_ab1)
    kind = "heterodyne" if p.detection == "heterodyne" else "homodyne_q"
    cond = measure_mode(sigma_full, bob_mode, kind)
    s_e_given_b = entropy(cond)
    return max(s_e - s_e_given_b, 0.0)


def holevo_untrusted_closed_form(v_mod: float, T: float, xi: float,
                                 detection: str) -> float:
    """Two-mode closed form for the untrusted special case (eta=1, v_el=0)."""
    a = v_mod + 1.0
    b = T * (a - 1.0) + 1.0 + T * xi
    c2 = T * (a * a - 1.0)
    delta = a * a + b * b - 2.0 * c2
    d = a * b - c2
    root = np.sqrt(max(delta * delta - 4.0 * d * d, 0.0))
    nu1 = np.sqrt((delta + root) / 2.0)
    nu2 = np.sqrt((delta - root) / 2.0)
    if detection == "homodyne":
        nu3 = np.sqrt(a * (a - c2 / b))
    elif detection == "heterodyne":
        nu3 = a - c2 / (b + 1.0)
    else:
        raise ValueError(f"detection must be one of {DETECTIONS}")
    return g_entropy(nu1) + g_entropy(nu2) - g_entropy(nu3)


def mutual_information(p: SecurityParams) -> float:
    """Alice-Bob mutual information in bits per symbol."""
    if p.v_mod == 0.0:
        return 0.0
    if p.detection == "homodyne":
        snr = p.eta * p.T * p.v_mod / (1.0 + p.v_el + p.eta * p.T * p.xi)
        return float(0.5 * np.log2(1.0 + snr))
    snr = 0.5 * p.eta * p.T * p.v_mod / (1.0 + p.v_el + 0.5 * p.eta * p.T * p.xi)
    return float(np.log2(1.0 + snr))


@dataclass(frozen=True)
class KeyFraction:
    raw: float                    # may be negative (protocol aborts)
    clamped: float
    i_ab: float
    chi_eb: float


def secret_key_fraction(p: SecurityParams) -> KeyFraction:
    """r = (1 - nu_pe) (1 - fer) (beta I_AB - chi_EB), in bits/symbol."""
    i_ab = mutual_information(p)
    chi = holevo_bound(p)
    raw = (1.0 - p.nu_pe) * (1.0 - p.fer) * (p.beta * i_ab - chi)
    return KeyFraction(raw=float(raw), clamped=float(max(raw, 0.0)),
                       i_ab=i_ab, chi_eb=chi)


def with_measured(p: SecurityParams, T_eff: float, xi_hat: float,
                  fer: float, beta: float) -> SecurityParams:
    """Security params at measured values; T_eff absorbs eta (T = T_eff/eta)."""
    return replace(p, T=min(T_eff / p.eta, 1.0), xi=max(xi_hat, 0.0),
                   fer=fer, beta=beta)
