"""Link parameter estimation from paired Alice/Bob symbol records.

Bob's values are in SNU after calibration.  Excess noise is referred to
the channel input: for homodyne the model is

    Var(x_B) = T_eff * (V_mod + xi) + 1 + v_el,   x_B = t * x_A + noise

with t = sqrt(T_eff) the quadrature-domain slope; T_eff absorbs channel
loss, detector efficiency, and any DSP mismatch.  Heterodyne records are
input-referred (vacuum variance 2 per quadrature); internally they are
rescaled to the per-detector model Var = (t^2/2)(V_mod + xi) + 1 + v_el.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class DegenerateLinkError(RuntimeError):
    pass


class InsufficientDataError(ValueError):
    pass


MIN_SYMBOLS = 1000


@dataclass(frozen=True)
class SymbolRecords:
    """Paired per-symbol quadratures: sent (complex SNU) and measured."""

    alice: np.ndarray             # complex SNU
    bob: np.ndarray               # real (homodyne) or complex input-referred SNU
    detection: str

    def __len__(self):
        return len(self.alice)

    def subset(self, sl) -> "SymbolRecords":
        return SymbolRecords(self.alice[sl], self.bob[sl], self.detection)


@dataclass(frozen=True)
class EstimationResult:
    t_hat: float                  # sqrt(T_eff), quadrature-domain slope
    T_eff: float
    xi_hat: float                 # SNU, channel-input-referred
    v_b: float                    # total Bob variance per quadrature (model units)
    n_symbols: int
    stderr_T: float
    stderr_xi: float
    detection: str
    v_el: float


def _paired_quadratures(records: SymbolRecords):
    """Flatten records to matched 1-D (x_A, x_B) arrays in per-detector units."""
    a = np.asarray(records.alice)
    b = np.asarray(records.bob)
    if records.detection == "heterodyne":
        # input-referred -> per-detector units
        b = b / np.sqrt(2.0)
        xa = np.concatenate([a.real, a.imag])
        xb = np.concatenate([b.real, b.imag])
        half = 0.5
    elif records.detection == "homodyne_q":
        xa, xb, half = a.real, np.real(b), 1.0
    elif records.detection == "homodyne_p":
        xa, xb, half = a.imag, np.real(b), 1.0
    else:
        raise ValueError(f"unknown detection kind {records.detection}")
    return xa, xb, half


def estimate_params(records: SymbolRecords, v_mod: float, v_el: float = 0.0) -> EstimationResult:
    """Estimate (T_eff, xi) with large-sample standard errors."""
    if len(records) < MIN_SYMBOLS:
        raise InsufficientDataError(
            f"need at least {MIN_SYMBOLS} symbols, got {len(records)}")
    if v_mod <= 0:
        raise ValueError("v_mod must be > 0")
    xa, xb, half = _paired_quadratures(records)
    n = len(xa)

    slope = float(np.dot(xa, xb) / np.dot(xa, xa))
    if slope <= 0:
        raise DegenerateLinkError(f"non-positive slope {slope}")
    # per-detector model: x_b = slope * x_a + z, slope^2 = half * T_eff
    t_hat = slope / np.sqrt(half)
    T_eff = t_hat ** 2

    v_b = float(np.mean(xb ** 2))
    noise_var = v_b - half * T_eff * v_mod
    xi_hat = (noise_var - 1.0 - v_el) / (half * T_eff)

    # large-sample errors: slope stderr from residual variance, variance
    # stderr from the chi^2 law Var(sigma^2_hat) = 2 sigma^4 / n
    resid_var = max(noise_var, 1e-12)
    stderr_slope = np.sqrt(resid_var / (n * v_mod))
    stderr_t = stderr_slope / np.sqrt(half)
    stderr_T = 2.0 * t_hat * stderr_t
    stderr_xi = v_b * np.sqrt(2.0 / n) / (half * T_eff)

    return EstimationResult(
        t_hat=t_hat, T_eff=T_eff, xi_hat=float(xi_hat), v_b=v_b,
        n_symbols=len(records), stderr_T=float(stderr_T),
        stderr_xi=float(stderr_xi), detection=records.detection, v_el=v_el)


def snr_per_dimension(result: EstimationResult, v_mod: float) -> float:
    """Signal-to-noise ratio per measured real dimension."""
    half = 0.5 if result.detection == "heterodyne" else 1.0
    sig = half * result.T_eff * v_mod
    noise = 1.0 + result.v_el + half * result.T_eff * max(result.xi_hat, 0.0)
    return sig / noise
