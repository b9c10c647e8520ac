"""Bob's coherent receiver: balanced detection, shot/thermal noise, ADC.

Detection is simulated semiclassically: the incoming field carries the
deterministic (or classically noisy) mean amplitude, and the quantum
uncertainty appears as shot noise of the balanced photocurrent.  Raw
output values are in photoelectron counts per sample; the SNU scale is
recovered downstream by the calibration sequence (dsp module), so the
absolute raw unit cancels.

For a balanced pair with total LO power P_LO (N_LO photons per sample)
and quantum efficiency eta, the difference count for an input field of
SNU quadrature x is

    D = eta * sqrt(N_LO) * x + shot + thermal

with shot variance eta*N_LO (Gaussian regime) or exact per-diode Poisson
counts, and thermal variance (eta*NEP/(h f_c))^2 / (2 f_s) from the
noise-equivalent power.  Heterodyne is dual homodyne: the signal is split
50/50 onto two balanced pairs (each with its own LO of power P_LO), one
per quadrature.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .constants import PLANCK
from .field import OpticalField, amplitude_to_quadratures
from .rng import RandomStream

DETECTION_KINDS = ("homodyne_q", "homodyne_p", "heterodyne")
SHOT_MODELS = ("poisson", "gaussian", "auto")

# auto mode switches to Poisson sampling below this LO photon number
POISSON_PHOTON_LIMIT = 1e5


@dataclass(frozen=True)
class AdcSpec:
    bits: int
    full_scale_sigma: float = 5.0   # auto-range: full scale = +-k*sigma of the input
    full_scale: Optional[float] = None  # fixed full scale overrides auto-ranging

    def __post_init__(self):
        if self.bits < 1:
            raise ValueError("adc bits must be >= 1")
        if self.full_scale_sigma <= 0:
            raise ValueError("full_scale_sigma must be > 0")
        if self.full_scale is not None and self.full_scale <= 0:
            raise ValueError("full_scale must be > 0")


@dataclass(frozen=True)
class ReceiverSpec:
    detection: str = "homodyne_q"
    eta: float = 0.7
    nep: float = 0.0              # W/sqrt(Hz)
    lo_power: float = 10e-3       # W, total at each balanced pair
    adc: Optional[AdcSpec] = None
    shot_model: str = "auto"

    def __post_init__(self):
        if self.detection not in DETECTION_KINDS:
            raise ValueError(f"detection must be one of {DETECTION_KINDS}")
        if not 0.0 < self.eta <= 1.0:
            raise ValueError(f"eta must be in (0, 1], got {self.eta}")
        if self.nep < 0:
            raise ValueError("nep must be >= 0")
        if self.lo_power <= 0:
            raise ValueError("lo_power must be > 0")
        if self.shot_model not in SHOT_MODELS:
            raise ValueError(f"shot_model must be one of {SHOT_MODELS}")

    def lo_photons_per_sample(self, sample_rate: float, carrier_frequency: float) -> float:
        return self.lo_power / (PLANCK * carrier_frequency * sample_rate)

    def thermal_sigma_counts(self, sample_rate: float, carrier_frequency: float) -> float:
        """Std of thermal noise in photoelectron counts per sample.

        Responsivity-referred NEP over the Nyquist band f_s/2:
        sigma = eta * NEP / (h f_c) / sqrt(2 f_s).
        """
        if self.nep == 0:
            return 0.0
        return self.eta * self.nep / (PLANCK * carrier_frequency) / np.sqrt(2.0 * sample_rate)

    def electronic_noise_snu(self, carrier_frequency: float) -> float:
        """Closed-form v_el = eta*NEP^2 / (2 h f_c P_LO)."""
        return self.eta * self.nep ** 2 / (2.0 * PLANCK * carrier_frequency * self.lo_power)


@dataclass(frozen=True)
class RawMeasurement:
    """Detector output in raw (photoelectron-count) units plus its context."""

    values: np.ndarray            # real (homodyne) or complex (heterodyne)
    receiver: ReceiverSpec
    sample_rate: float
    carrier_frequency: float

    def __len__(self):
        return len(self.values)

    def with_values(self, values) -> "RawMeasurement":
        return RawMeasurement(values, self.receiver, self.sample_rate,
                              self.carrier_frequency)


def _use_poisson(spec: ReceiverSpec, n_lo: float) -> bool:
    if spec.shot_model == "poisson":
        return True
    if spec.shot_model == "gaussian":
        return False
    return n_lo < POISSON_PHOTON_LIMIT


def _balanced_output(alpha_sig, lo_phase, n_lo, spec, rng, poisson):
    """Difference count of one balanced pair for a given LO phase."""
    g = rng.generator
    n = len(alpha_sig)
    if not poisson:
        x = 2.0 * np.real(alpha_sig * np.exp(-1j * lo_phase))
        return spec.eta * np.sqrt(n_lo) * x + g.normal(0.0, np.sqrt(spec.eta * n_lo), n)
    alpha_lo = np.sqrt(n_lo) * np.exp(1j * lo_phase)
    lam_plus = spec.eta * 0.5 * np.abs(alpha_lo + alpha_sig) ** 2
    lam_minus = spec.eta * 0.5 * np.abs(alpha_lo - alpha_sig) ** 2
    return (g.poisson(lam_plus).astype(np.float64)
            - g.poisson(lam_minus).astype(np.float64))


def coherent_detect(field: OpticalField, spec: ReceiverSpec, rng: RandomStream,
                    lo_on: bool = True) -> RawMeasurement:
    """Detect a field; returns raw difference counts (uncalibrated)."""
    if len(field) == 0:
        raise ValueError("cannot detect a zero-length field")
    fs = field.sample_rate
    fc = field.carrier_frequency
    n = len(field)
    g = rng.generator
    sigma_th = spec.thermal_sigma_counts(fs, fc)

    if not lo_on:
        # dark measurement: no LO, no shot noise, thermal only
        if spec.detection == "heterodyne":
            vals = (g.normal(0.0, sigma_th, n) + 1j * g.normal(0.0, sigma_th, n)
                    if sigma_th > 0 else np.zeros(n, dtype=np.complex128))
        else:
            vals = g.normal(0.0, sigma_th, n) if sigma_th > 0 else np.zeros(n)
        return RawMeasurement(vals, spec, fs, fc)

    n_lo = spec.lo_photons_per_sample(fs, fc)
    poisson = _use_poisson(spec, n_lo)
    # photon-number amplitude per sample: |alpha|^2 = photons/sample
    alpha = field.samples / np.sqrt(PLANCK * fc * fs)

    if spec.detection == "heterodyne":
        alpha_split = alpha / np.sqrt(2.0)
        d_q = _balanced_output(alpha_split, 0.0, n_lo, spec, rng, poisson)
        d_p = _balanced_output(alpha_split, np.pi / 2.0, n_lo, spec, rng, poisson)
        if sigma_th > 0:
            d_q = d_q + g.normal(0.0, sigma_th, n)
            d_p = d_p + g.normal(0.0, sigma_th, n)
        vals = d_q + 1j * d_p
    else:
        phase = 0.0 if spec.detection == "homodyne_q" else np.pi / 2.0
        d = _balanced_output(alpha, phase, n_lo, spec, rng, poisson)
        if sigma_th > 0:
            d = d + g.normal(0.0, sigma_th, n)
        vals = d
    return RawMeasurement(vals, spec, fs, fc)


def quantize(meas: RawMeasurement, adc: AdcSpec) -> RawMeasurement:
    """Mid-tread uniform quantizer with auto-ranged full scale k*sigma."""
    vals = meas.values
    if adc.full_scale is not None:
        a = adc.full_scale
    else:
        if np.iscomplexobj(vals):
            comps = np.concatenate([vals.real, vals.imag])
        else:
            comps = vals
        sigma = float(np.std(comps))
        if sigma == 0.0:
            warnings.warn("quantize: constant-zero input, returning unchanged")
            return meas
        a = adc.full_scale_sigma * sigma
    delta = 2.0 * a / (2 ** adc.bits)
    lo, hi = -a + delta / 2.0, a - delta / 2.0

    def q(x):
        return np.clip(delta * np.round(x / delta), lo, hi)

    if np.iscomplexobj(vals):
        out = q(vals.real) + 1j * q(vals.imag)
    else:
        out = q(vals)
    return meas.with_values(out)
