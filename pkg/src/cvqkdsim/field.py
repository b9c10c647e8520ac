"""Complex-baseband optical field and the shot-noise-unit conventions.

A field is a time-discrete sequence of complex phasors a_i in sqrt(W)
relative to a carrier frequency: |a_i|^2 is the instantaneous optical
power.  Shot noise units (SNU) normalize quadratures so that the vacuum
state has variance 1 in each of q and p; a coherent state with mean
quadratures (q, p) in SNU carries n = (q^2 + p^2)/4 photons.

The bridge between the two pictures, for a sample of duration 1/f_s at
carrier f_c, is

    q + i*p = 2 * a / sqrt(h * f_c * f_s)

so that the photon number per sample |a|^2 / (h f_c f_s) equals
(q^2 + p^2)/4.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from .constants import PLANCK
from .rng import RandomStream


@dataclass(frozen=True)
class SnuConvention:
    """Vacuum variance 1 per quadrature; n = (q^2+p^2)/4 per coherent symbol."""

    vacuum_variance: float = 1.0

    @staticmethod
    def photon_number(q, p):
        return (np.asarray(q) ** 2 + np.asarray(p) ** 2) / 4.0


SNU = SnuConvention()


@dataclass(frozen=True)
class OpticalField:
    """Time-discrete complex envelope in sqrt(W)."""

    samples: np.ndarray
    sample_rate: float
    carrier_frequency: float
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "samples",
                           np.ascontiguousarray(self.samples, dtype=np.complex128))

    def __len__(self):
        return len(self.samples)

    def with_samples(self, samples, label=None) -> "OpticalField":
        return OpticalField(samples, self.sample_rate, self.carrier_frequency,
                            self.label if label is None else label)


def make_field(samples, sample_rate, carrier_frequency, label="") -> OpticalField:
    """Build an OpticalField, validating rates."""
    if sample_rate <= 0:
        raise ValueError(f"sample_rate must be > 0, got {sample_rate}")
    if carrier_frequency <= 0:
        raise ValueError(f"carrier_frequency must be > 0, got {carrier_frequency}")
    return OpticalField(np.asarray(samples, dtype=np.complex128),
                        float(sample_rate), float(carrier_frequency), label)


def mean_power(field: OpticalField) -> float:
    """Arithmetic mean of |a_i|^2 in W; 0 for an empty field."""
    if len(field) == 0:
        return 0.0
    return float(np.mean(np.abs(field.samples) ** 2))


def add_awgn_optical(field: OpticalField, one_sided_psd: float,
                     rng: RandomStream) -> OpticalField:
    """Add white circular Gaussian field noise of the given one-sided PSD.

    Total added power is one_sided_psd * sample_rate, split equally between
    the real and imaginary parts.  psd = 0 returns the input unchanged.
    """
    if one_sided_psd < 0:
        raise ValueError(f"one_sided_psd must be >= 0, got {one_sided_psd}")
    if one_sided_psd == 0 or len(field) == 0:
        return field
    sigma = np.sqrt(one_sided_psd * field.sample_rate / 2.0)
    g = rng.generator
    noise = sigma * (g.standard_normal(len(field))
                     + 1j * g.standard_normal(len(field)))
    return field.with_samples(field.samples + noise)


def photons_per_sample(field: OpticalField) -> np.ndarray:
    """Mean photon number per sample interval."""
    return np.abs(field.samples) ** 2 / (PLANCK * field.carrier_frequency * field.sample_rate)


def snu_scale(sample_rate: float, carrier_frequency: float) -> float:
    """Amplitude of one SNU quadrature unit in sqrt(W): a = (q/2)*scale."""
    return float(np.sqrt(PLANCK * carrier_frequency * sample_rate))


def quadratures_to_amplitude(symbols, sample_rate, carrier_frequency):
    """Complex SNU quadratures (q + i*p) -> field amplitude in sqrt(W)."""
    return np.asarray(symbols, dtype=np.complex128) * (snu_scale(sample_rate, carrier_frequency) / 2.0)


def amplitude_to_quadratures(samples, sample_rate, carrier_frequency):
    """Field amplitude in sqrt(W) -> complex SNU quadratures."""
    return 2.0 * np.asarray(samples, dtype=np.complex128) / snu_scale(sample_rate, carrier_frequency)


def psd_to_snu_variance(one_sided_psd: float, carrier_frequency: float) -> float:
    """Per-quadrature SNU variance added by a white optical PSD.

    A one-sided PSD S injects n = S/(h f_c) thermal photons per sample mode,
    i.e. 2*S/(h f_c) SNU of variance on each quadrature.
    """
    return 2.0 * one_sided_psd / (PLANCK * carrier_frequency)


def snu_variance_to_psd(variance: float, carrier_frequency: float) -> float:
    """Inverse of psd_to_snu_variance."""
    return variance * PLANCK * carrier_frequency / 2.0
