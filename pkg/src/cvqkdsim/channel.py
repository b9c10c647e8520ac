"""Quantum channel: attenuation and Raman noise from a co-propagating channel.

The channel either applies a fixed transmittance T_ch directly or derives
it from fibre length and attenuation in dB/km.  Raman noise from a
classical channel sharing the fibre is modeled as white additive Gaussian
field noise of a given one-sided PSD, referred to the channel output
(injected after attenuation).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .field import OpticalField, add_awgn_optical
from .rng import RandomStream


@dataclass(frozen=True)
class ChannelSpec:
    mode: str = "fixed_T"         # fixed_T | fibre
    t_ch: float = 1.0             # fixed mode
    length_km: float = 0.0        # fibre mode
    attenuation_db_km: float = 0.2
    raman_psd: float = 0.0        # W/Hz at channel output

    def __post_init__(self):
        if self.mode not in ("fixed_T", "fibre"):
            raise ValueError(f"channel mode must be fixed_T or fibre, got {self.mode}")
        if not 0.0 <= self.t_ch <= 1.0:
            raise ValueError(f"t_ch must be in [0, 1], got {self.t_ch}")
        if self.length_km < 0 or self.attenuation_db_km < 0:
            raise ValueError("length and attenuation must be >= 0")
        if self.raman_psd < 0:
            raise ValueError("raman_psd must be >= 0")

    @property
    def transmittance_value(self) -> float:
        if self.mode == "fixed_T":
            return self.t_ch
        return transmittance(self.length_km, self.attenuation_db_km)


def transmittance(length_km: float, attenuation_db_km: float) -> float:
    """Power transmittance 10^(-attenuation*length/10)."""
    if length_km < 0 or attenuation_db_km < 0:
        raise ValueError("length and attenuation must be >= 0")
    return float(10.0 ** (-attenuation_db_km * length_km / 10.0))


def attenuate(field: OpticalField, t: float) -> OpticalField:
    """Scale every sample by sqrt(T); power scales by T exactly."""
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"transmittance must be in [0, 1], got {t}")
    if t == 1.0:
        return field
    return field.with_samples(field.samples * np.sqrt(t))


def inject_raman(field: OpticalField, raman_psd: float,
                 rng: RandomStream) -> OpticalField:
    """Add Raman noise of the given one-sided PSD at the channel output."""
    return add_awgn_optical(field, raman_psd, rng)


def propagate(field: OpticalField, spec: ChannelSpec, rng: RandomStream) -> OpticalField:
    """Attenuate then inject Raman noise (the implemented order)."""
    out = attenuate(field, spec.transmittance_value)
    if spec.raman_psd > 0:
        out = inject_raman(out, spec.raman_psd, rng)
    return out
