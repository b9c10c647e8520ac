"""Alice's transmitter: Gaussian modulation, pulse shaping, laser impairments.

Symbols are complex SNU quadrature pairs q + i*p with each quadrature
drawn i.i.d. from N(0, V_mod).  Pulse shaping emits either one sample per
symbol or a sin^4 envelope over samples_per_symbol samples; in both modes
the global amplitude scale is chosen so that a symbol with quadratures
(q, p) carries pulse energy (q^2+p^2)/4 * h * f_c, i.e. its SNU photon
number.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .constants import PLANCK
from .field import OpticalField, make_field
from .rng import RandomStream

PULSE_SHAPES = ("single", "sin4")


@dataclass(frozen=True)
class ModulationSpec:
    v_mod: float                  # SNU, per-quadrature variance
    symbol_rate: float            # Bd
    samples_per_symbol: int = 1
    pulse_shape: str = "single"

    def __post_init__(self):
        if self.v_mod < 0:
            raise ValueError(f"v_mod must be >= 0, got {self.v_mod}")
        if self.symbol_rate <= 0:
            raise ValueError(f"symbol_rate must be > 0, got {self.symbol_rate}")
        if self.pulse_shape not in PULSE_SHAPES:
            raise ValueError(f"pulse_shape must be one of {PULSE_SHAPES}")
        if self.pulse_shape == "single" and self.samples_per_symbol != 1:
            raise ValueError("single-sample shape forces samples_per_symbol = 1")
        if self.pulse_shape == "sin4" and self.samples_per_symbol < 2:
            raise ValueError("sin4 shape requires samples_per_symbol >= 2")

    @property
    def sample_rate(self) -> float:
        return self.symbol_rate * self.samples_per_symbol


@dataclass(frozen=True)
class LaserSpec:
    power: float = 1e-3           # W
    linewidth: float = 0.0        # Hz, Lorentzian FWHM
    rin_psd: float = 0.0          # 1/Hz, one-sided relative intensity noise

    def __post_init__(self):
        if self.power <= 0:
            raise ValueError("laser power must be > 0")
        if self.linewidth < 0 or self.rin_psd < 0:
            raise ValueError("linewidth and rin_psd must be >= 0")


@dataclass(frozen=True)
class PilotSpec:
    enabled: bool = False
    pilot_every: int = 4          # one pilot slot per pilot_every slots
    pilot_amplitude: float = 2000.0   # SNU, on the q quadrature, phase 0

    def __post_init__(self):
        if self.enabled:
            if self.pilot_every < 2:
                raise ValueError("pilot_every must be >= 2 when enabled")
            if self.pilot_amplitude <= 0:
                raise ValueError("pilot_amplitude must be > 0 when enabled")


def draw_symbols(n: int, v_mod: float, rng: RandomStream) -> np.ndarray:
    """Draw n complex symbols with i.i.d. N(0, V_mod) quadratures."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if v_mod < 0:
        raise ValueError(f"v_mod must be >= 0, got {v_mod}")
    if v_mod == 0:
        return np.zeros(n, dtype=np.complex128)
    sigma = np.sqrt(v_mod)
    g = rng.generator
    return sigma * (g.standard_normal(n) + 1j * g.standard_normal(n))


def pulse_envelope(spec: ModulationSpec) -> np.ndarray:
    """Unit-peak envelope of one symbol (length samples_per_symbol)."""
    if spec.pulse_shape == "single":
        return np.ones(1)
    i = np.arange(spec.samples_per_symbol)
    return np.sin(np.pi * i / spec.samples_per_symbol) ** 4


def amplitude_scale(spec: ModulationSpec, carrier_frequency: float) -> float:
    """SNU -> sqrt(W) scale A0 such that a (q,p) symbol carries (q^2+p^2)/4 photons.

    Pulse energy sum(|s*A0*env|^2)/f_s must equal |s|^2/4 * h * f_c, so
    A0 = sqrt(h f_c f_s / (4 * sum(env^2))).
    """
    env = pulse_envelope(spec)
    fs = spec.sample_rate
    return float(np.sqrt(PLANCK * carrier_frequency * fs / (4.0 * np.sum(env ** 2))))


def shape_pulses(symbols, spec: ModulationSpec, carrier_frequency: float) -> OpticalField:
    """Emit the optical field for a symbol sequence."""
    symbols = np.asarray(symbols, dtype=np.complex128)
    env = pulse_envelope(spec)
    a0 = amplitude_scale(spec, carrier_frequency)
    samples = (symbols[:, None] * (a0 * env)[None, :]).ravel()
    return make_field(samples, spec.sample_rate, carrier_frequency, label="tx")


def apply_rin(field: OpticalField, rin_psd: float, rng: RandomStream) -> OpticalField:
    """Multiply each sample by sqrt(1 + delta), delta ~ N(0, rin_psd*f_s/2).

    Models white relative intensity noise over the Nyquist band; mean power
    is preserved in expectation.  The variance guard keeps the model in the
    perturbative regime.
    """
    if rin_psd < 0:
        raise ValueError("rin_psd must be >= 0")
    if rin_psd == 0 or len(field) == 0:
        return field
    var = rin_psd * field.sample_rate / 2.0
    if var >= 0.5:
        raise ValueError(f"rin_psd*f_s/2 = {var:.3g} >= 0.5: outside the perturbative model")
    delta = rng.generator.normal(0.0, np.sqrt(var), len(field))
    # power cannot go negative; with var < 0.5 clipping is vanishingly rare
    factor = np.sqrt(np.maximum(1.0 + delta, 0.0))
    return field.with_samples(field.samples * factor)


def apply_phase_diffusion(field: OpticalField, linewidth: float,
                          rng: RandomStream) -> OpticalField:
    """Wiener phase walk with increment variance 2*pi*linewidth/f_s per sample."""
    if linewidth < 0:
        raise ValueError("linewidth must be >= 0")
    if linewidth == 0 or len(field) == 0:
        return field
    step = np.sqrt(2.0 * np.pi * linewidth / field.sample_rate)
    phase = np.cumsum(rng.generator.normal(0.0, step, len(field)))
    return field.with_samples(field.samples * np.exp(1j * phase))


def multiplex_pilot(quantum_symbols, pilot: PilotSpec):
    """Insert pilot symbols (pilot_amplitude, 0) every pilot_every slots.

    Returns (symbol sequence with pilots, pilot slot indices).  Disabled
    pilots pass the sequence through with an empty index list.
    """
    quantum_symbols = np.asarray(quantum_symbols, dtype=np.complex128)
    if not pilot.enabled:
        return quantum_symbols, np.array([], dtype=np.intp)
    k = pilot.pilot_every
    nq = len(quantum_symbols)
    n_pilots = int(np.ceil(nq / (k - 1))) if nq else 0
    total = nq + n_pilots
    out = np.empty(total, dtype=np.complex128)
    positions = np.arange(n_pilots) * k
    mask = np.zeros(total, dtype=bool)
    mask[positions] = True
    out[mask] = pilot.pilot_amplitude
    out[~mask] = quantum_symbols
    return out, positions


def demultiplex_pilot(symbols, pilot_positions):
    """Remove pilot slots, inverse of multiplex_pilot."""
    symbols = np.asarray(symbols)
    mask = np.ones(len(symbols), dtype=bool)
    mask[np.asarray(pilot_positions, dtype=np.intp)] = False
    return symbols[mask]
