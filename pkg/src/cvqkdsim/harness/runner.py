"""Scenario execution: tx -> channel -> rx -> dsp -> estimation -> security.

Each run derives one substream per noise source from the scenario's
master seed, so toggling a source never shifts the draws of the others,
and repeated runs with the same seed are bit-identical.  Sweeps give
every point an independent point seed derived from (master_seed, index).
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Optional

import numpy as np

from .. import channel as channel_mod
from ..codes import load_example_code
from ..dsp import (FilterSpec, calibrate_snu, extract_symbols,
                   find_timing_offset, gaussian_lowpass, phase_recover)
from ..estimation import SymbolRecords, estimate_params
from ..field import snu_variance_to_psd
from ..postproc import key_pipeline
from ..rng import RandomStream, stream_for
from ..rxchain import coherent_detect, quantize
from ..security import (SecurityParams, holevo_bound,
                        holevo_untrusted_closed_form, mutual_information,
                        secret_key_fraction)
from ..txchain import (apply_phase_diffusion, apply_rin, draw_symbols,
                       multiplex_pilot, shape_pulses)
from .scenario import Scenario, ScenarioError, SweepDef

CSV_COLUMNS = (
    "label", "sweep_param", "sweep_value", "n_symbols", "point_seed",
    "t_eff", "t_eff_stderr", "xi_hat", "xi_stderr", "v_el",
    "i_ab", "chi_eb", "skf_analytic",
    "fer", "beta_achieved", "skf_measured", "runtime_s",
)


@dataclass(frozen=True)
class MetricsRow:
    label: str
    sweep_param: str
    sweep_value: float
    n_symbols: int
    point_seed: int
    t_eff: float
    t_eff_stderr: float
    xi_hat: float
    xi_stderr: float
    v_el: float
    i_ab: float
    chi_eb: float
    skf_analytic: float
    fer: float
    beta_achieved: float
    skf_measured: float
    runtime_s: float

    def astuple(self):
        return tuple(getattr(self, f.name) for f in fields(self))


def point_seed(master_seed: int, index: int) -> int:
    """Independent per-point seed derived from (master_seed, sweep index)."""
    ss = np.random.SeedSequence(entropy=master_seed, spawn_key=(997, index))
    return int(ss.generate_state(1, np.uint64)[0] >> 1)


def analytic_security(s: Scenario, v_el: float):
    """I_AB, chi_EB, and key fraction at the configured (resolved) parameters.

    chi honors the detector_trust setting: `untrusted` refers eta and v_el
    into the channel Eve controls (the attribution the noise-study figures
    use); `trusted` keeps them inside Bob's detector.
    """
    det = s.security_detection
    t_ch = s.channel.transmittance_value
    eta = s.receiver.eta
    xi_ch = s.excess_noise_target
    from ..field import psd_to_snu_variance
    if s.channel.raman_psd > 0:
        xi_ch = xi_ch + psd_to_snu_variance(s.channel.raman_psd, s.carrier_frequency) / t_ch
    p_meas = SecurityParams(v_mod=s.modulation.v_mod, T=t_ch, xi=xi_ch, eta=eta,
                            v_el=v_el, detection=det,
                            beta=s.get("security", "beta"),
                            nu_pe=s.get("security", "nu_pe"))
    i_ab = mutual_information(p_meas)
    if s.get("security", "detector_trust") == "untrusted":
        half = 0.5 if det == "heterodyne" else 1.0
        xi_u = xi_ch + v_el / (half * eta * t_ch)
        p_chi = SecurityParams(v_mod=s.modulation.v_mod, T=eta * t_ch, xi=xi_u,
                               eta=1.0, v_el=0.0, detection=det,
                               beta=p_meas.beta, nu_pe=p_meas.nu_pe)
        chi = holevo_bound(p_chi)
    else:
        chi = holevo_bound(p_meas)
    raw = (1.0 - p_meas.nu_pe) * (p_meas.beta * i_ab - chi)
    return i_ab, chi, max(raw, 0.0)


def run_scenario(s: Scenario, sweep_param: str = "", sweep_value: float = float("nan"),
                 seed: Optional[int] = None, extras: Optional[dict] = None) -> MetricsRow:
    """Execute one scenario point and compute its metrics row.

    When a dict is passed as `extras`, side products that do not belong in
    the CSV (the KeyResult, the SNU scale) are stored into it.
    """
    s.require_valid()
    t0 = time.perf_counter()
    seed = s.master_seed if seed is None else seed
    mod = s.modulation
    rx = s.receiver
    fc = s.carrier_frequency
    n_symbols = s.n_symbols
    pilot = s.pilot
    guard = s.get("dsp", "guard_symbols") if mod.pulse_shape == "sin4" else 0

    # ---- Alice ----
    symbols = draw_symbols(n_symbols, mod.v_mod, stream_for(seed, "symbols"))
    seq, pilot_positions = multiplex_pilot(symbols, pilot)
    if guard:
        z = np.zeros(guard, dtype=complex)
        seq = np.concatenate([z, seq, z])
        pilot_positions = pilot_positions + guard
    field = shape_pulses(seq, mod, fc)
    if s.laser.rin_psd > 0:
        field = apply_rin(field, s.laser.rin_psd, stream_for(seed, "rin"))
    if s.laser.linewidth > 0:
        field = apply_phase_diffusion(field, s.laser.linewidth, stream_for(seed, "phase"))

    # ---- channel ----
    ch = s.channel
    field = channel_mod.attenuate(field, ch.transmittance_value)
    if ch.raman_psd > 0:
        field = channel_mod.inject_raman(field, ch.raman_psd, stream_for(seed, "raman"))
    if s.excess_noise_target > 0:
        psd = snu_variance_to_psd(ch.transmittance_value * s.excess_noise_target, fc)
        field = channel_mod.inject_raman(field, psd, stream_for(seed, "excess"))

    # ---- Bob ----
    meas = coherent_detect(field, rx, stream_for(seed, "shot"))
    if rx.adc is not None:
        meas = quantize(meas, rx.adc)
    fspec = s.filter_spec
    vals = meas.values
    offset = 0
    if fspec is not None:
        vals = gaussian_lowpass(vals, fspec, field.sample_rate)
    if mod.samples_per_symbol > 1:
        offset = find_timing_offset(vals, mod.samples_per_symbol, seq)
        vals = extract_symbols(vals, mod.samples_per_symbol, offset)
    if guard:
        vals = vals[guard:-guard]
        pilot_positions = pilot_positions - guard

    scale = calibrate_snu(rx, field.sample_rate, fc, stream_for(seed, "calibration"),
                          n_samples=s.get("dsp", "calibration_samples"),
                          filter_spec=fspec,
                          samples_per_symbol=mod.samples_per_symbol,
                          timing_offset=offset)
    bob = scale.to_snu(vals, rx.detection)
    if pilot.enabled:
        recover = s.get("dsp", "phase_recovery") in ("auto", "on")
        if recover:
            bob, _ = phase_recover(bob, pilot_positions, pilot.pilot_amplitude)
        else:
            keep = np.ones(len(bob), dtype=bool)
            keep[pilot_positions] = False
            bob = bob[keep]

    records = SymbolRecords(symbols, bob, rx.detection)
    v_el_est = scale.v_el if s.get("dsp", "subtract_v_el") else 0.0
    est = estimate_params(records, mod.v_mod, v_el=v_el_est)

    i_ab, chi_eb, skf_analytic = analytic_security(s, scale.v_el)

    fer = float("nan")
    beta_achieved = float("nan")
    skf_measured = float("nan")
    key_result = None
    if s.get("postproc", "enabled"):
        code = load_example_code(s.get("postproc", "code"))
        sec = SecurityParams(v_mod=mod.v_mod, T=ch.transmittance_value,
                             xi=max(s.excess_noise_target, 0.0), eta=rx.eta,
                             v_el=scale.v_el, detection="heterodyne",
                             beta=s.get("security", "beta"),
                             nu_pe=s.get("security", "nu_pe"))
        key_result = key_pipeline(records, code, s.get("postproc", "dimension"),
                                  sec, stream_for(seed, "postproc"),
                                  max_iters=s.get("postproc", "max_iters"))
        fer = key_result.fer
        beta_achieved = key_result.beta_achieved
        skf_measured = key_result.skf

    if extras is not None:
        extras["key_result"] = key_result
        extras["snu_scale"] = scale
        extras["estimation"] = est

    return MetricsRow(
        label=s.label, sweep_param=sweep_param, sweep_value=sweep_value,
        n_symbols=n_symbols, point_seed=seed,
        t_eff=est.T_eff, t_eff_stderr=est.stderr_T,
        xi_hat=est.xi_hat, xi_stderr=est.stderr_xi, v_el=scale.v_el,
        i_ab=i_ab, chi_eb=chi_eb, skf_analytic=skf_analytic,
        fer=fer, beta_achieved=beta_achieved, skf_measured=skf_measured,
        runtime_s=time.perf_counter() - t0)


def _run_point(args):
    s, param, value, seed = args
    sec, _, key = param.partition(".")
    point = s.with_override(sec, key, value)
    return run_scenario(point, sweep_param=param, sweep_value=value, seed=seed)


def run_sweep(s: Scenario, param: str, values, jobs: int = 1):
    """One MetricsRow per value; independent substreams per point."""
    from .scenario import SCHEMA
    sec, _, key = param.partition(".")
    if (sec, key) not in SCHEMA:
        raise ScenarioError([f"unknown sweep parameter {param}"])
    tasks = [(s, param, float(v), point_seed(s.master_seed, i))
             for i, v in enumerate(values)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_run_point, tasks))
    return [_run_point(t) for t in tasks]


def emit_csv(rows, path) -> None:
    """Fixed-schema CSV; floats at 17 significant digits, runtime last."""
    if not rows:
        raise ValueError("emit_csv needs at least one row")
    path = Path(path)
    if path.exists():
        path.unlink()
    lines = [",".join(CSV_COLUMNS)]
    for row in rows:
        parts = []
        for val in row.astuple():
            if isinstance(val, float):
                parts.append(format(val, ".17g"))
            else:
                parts.append(str(val))
        lines.append(",".join(parts))
    path.write_text("\n".join(lines) + "\n")


def schema_hash() -> str:
    import hashlib
    return hashlib.sha256(",".join(CSV_COLUMNS).encode()).hexdigest()[:16]
