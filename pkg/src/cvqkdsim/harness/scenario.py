"""Scenario files: a sectioned key=value text format (INI dialect).

Sections mirror the simulator modules; every key has a default, so a
scenario file only states what it changes.  `validate` collects every
violated constraint instead of stopping at the first.  The fully resolved
configuration can be echoed back to text (`scenario.resolved`) for
provenance and for downstream tools that recompute theory curves.
"""

from __future__ import annotations

import configparser
import io
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Optional

from ..channel import ChannelSpec
from ..dsp import FilterSpec
from ..rxchain import AdcSpec, ReceiverSpec
from ..txchain import LaserSpec, ModulationSpec, PilotSpec


class ScenarioError(ValueError):
    """Raised with the full list of validation failures."""

    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("invalid scenario:\n  " + "\n  ".join(self.problems))


_BOOL_TRUE = ("1", "true", "yes", "on")
_BOOL_FALSE = ("0", "false", "no", "off")


def _to_bool(s: str) -> bool:
    v = s.strip().lower()
    if v in _BOOL_TRUE:
        return True
    if v in _BOOL_FALSE:
        return False
    raise ValueError(f"not a boolean: {s!r}")


# (section, key) -> (type, default)
SCHEMA = {
    ("run", "label"): (str, "scenario"),
    ("run", "n_symbols"): (int, 1 << 20),
    ("run", "master_seed"): (int, 42),
    ("modulation", "v_mod"): (float, 5.0),
    ("modulation", "symbol_rate"): (float, 1e9),
    ("modulation", "samples_per_symbol"): (int, 1),
    ("modulation", "pulse_shape"): (str, "single"),
    ("laser", "power"): (float, 1e-3),
    ("laser", "linewidth"): (float, 0.0),
    ("laser", "rin_psd"): (float, 0.0),
    ("pilot", "enabled"): (bool, False),
    ("pilot", "pilot_every"): (int, 4),
    ("pilot", "pilot_amplitude"): (float, 2000.0),
    ("channel", "mode"): (str, "fixed_T"),
    ("channel", "t_ch"): (float, 1.0),
    ("channel", "length_km"): (float, 0.0),
    ("channel", "attenuation_db_km"): (float, 0.2),
    ("channel", "raman_psd"): (float, 0.0),
    ("channel", "excess_noise_target"): (float, 0.0),
    ("receiver", "detection"): (str, "homodyne_q"),
    ("receiver", "eta"): (float, 0.7),
    ("receiver", "nep"): (float, 0.0),
    ("receiver", "lo_power"): (float, 10e-3),
    ("receiver", "carrier_frequency"): (float, 193.4e12),
    ("receiver", "shot_model"): (str, "auto"),
    ("adc", "enabled"): (bool, False),
    ("adc", "bits"): (int, 8),
    ("adc", "full_scale_sigma"): (float, 5.0),
    ("filter", "enabled"): (bool, False),
    ("filter", "relative_bandwidth"): (float, 0.9),
    ("dsp", "calibration_samples"): (int, 1 << 22),
    ("dsp", "guard_symbols"): (int, 8),
    ("dsp", "phase_recovery"): (str, "auto"),
    # subtract the calibrated v_el in estimation (trusted electronics); the
    # noise-study figures attribute it to the channel instead
    ("dsp", "subtract_v_el"): (bool, True),
    ("security", "detection"): (str, "auto"),
    ("security", "beta"): (float, 0.95),
    ("security", "nu_pe"): (float, 0.1),
    ("security", "detector_trust"): (str, "trusted"),
    ("postproc", "enabled"): (bool, False),
    ("postproc", "dimension"): (int, 8),
    ("postproc", "code"): (str, "rate01_n10000"),
    ("postproc", "max_iters"): (int, 200),
    ("toggles", "thermal"): (bool, True),
    ("toggles", "rin"): (bool, True),
    ("toggles", "phase_diffusion"): (bool, True),
    ("toggles", "raman"): (bool, True),
    ("toggles", "adc"): (bool, True),
    ("toggles", "excess"): (bool, True),
}

SECTIONS = sorted({sec for sec, _ in SCHEMA})


@dataclass(frozen=True)
class Scenario:
    """Fully resolved simulation configuration (flat section.key mapping)."""

    values: dict

    def get(self, section: str, key: str):
        return self.values[(section, key)]

    def with_override(self, section: str, key: str, value) -> "Scenario":
        if (section, key) not in SCHEMA:
            raise KeyError(f"unknown scenario field {section}.{key}")
        typ, _ = SCHEMA[(section, key)]
        new = dict(self.values)
        new[(section, key)] = typ(value)
        return Scenario(new)

    # ---- typed views onto the module specs ----

    @property
    def label(self) -> str:
        return self.get("run", "label")

    @property
    def n_symbols(self) -> int:
        return self.get("run", "n_symbols")

    @property
    def master_seed(self) -> int:
        return self.get("run", "master_seed")

    @property
    def modulation(self) -> ModulationSpec:
        return ModulationSpec(
            v_mod=self.get("modulation", "v_mod"),
            symbol_rate=self.get("modulation", "symbol_rate"),
            samples_per_symbol=self.get("modulation", "samples_per_symbol"),
            pulse_shape=self.get("modulation", "pulse_shape"))

    @property
    def laser(self) -> LaserSpec:
        return LaserSpec(power=self.get("laser", "power"),
                         linewidth=self.get("laser", "linewidth")
                         if self.get("toggles", "phase_diffusion") else 0.0,
                         rin_psd=self.get("laser", "rin_psd")
                         if self.get("toggles", "rin") else 0.0)

    @property
    def pilot(self) -> PilotSpec:
        return PilotSpec(enabled=self.get("pilot", "enabled"),
                         pilot_every=self.get("pilot", "pilot_every"),
                         pilot_amplitude=self.get("pilot", "pilot_amplitude"))

    @property
    def channel(self) -> ChannelSpec:
        return ChannelSpec(
            mode=self.get("channel", "mode"),
            t_ch=self.get("channel", "t_ch"),
            length_km=self.get("channel", "length_km"),
            attenuation_db_km=self.get("channel", "attenuation_db_km"),
            raman_psd=self.get("channel", "raman_psd")
            if self.get("toggles", "raman") else 0.0)

    @property
    def excess_noise_target(self) -> float:
        return (self.get("channel", "excess_noise_target")
                if self.get("toggles", "excess") else 0.0)

    @property
    def receiver(self) -> ReceiverSpec:
        adc = None
        if self.get("adc", "enabled") and self.get("toggles", "adc"):
            adc = AdcSpec(bits=self.get("adc", "bits"),
                          full_scale_sigma=self.get("adc", "full_scale_sigma"))
        return ReceiverSpec(
            detection=self.get("receiver", "detection"),
            eta=self.get("receiver", "eta"),
            nep=self.get("receiver", "nep") if self.get("toggles", "thermal") else 0.0,
            lo_power=self.get("receiver", "lo_power"),
            adc=adc,
            shot_model=self.get("receiver", "shot_model"))

    @property
    def carrier_frequency(self) -> float:
        return self.get("receiver", "carrier_frequency")

    @property
    def filter_spec(self) -> Optional[FilterSpec]:
        if not self.get("filter", "enabled"):
            return None
        return FilterSpec.from_relative(self.get("filter", "relative_bandwidth"),
                                        self.get("modulation", "symbol_rate"))

    @property
    def security_detection(self) -> str:
        d = self.get("security", "detection")
        if d == "auto":
            return ("heterodyne" if self.get("receiver", "detection") == "heterodyne"
                    else "homodyne")
        return d

    def validate(self) -> list:
        """Collect every violated cross-field constraint."""
        problems = []
        for prop in ("modulation", "laser", "pilot", "channel", "receiver"):
            try:
                getattr(self, prop)
            except (ValueError, TypeError) as err:
                problems.append(f"{prop}: {err}")
        if self.n_symbols < 1:
            problems.append("run: n_symbols must be >= 1")
        if self.get("pilot", "enabled") and self.get("receiver", "detection") != "heterodyne":
            problems.append("pilot: pilot multiplexing requires heterodyne detection")
        shape = self.get("modulation", "pulse_shape")
        sps = self.get("modulation", "samples_per_symbol")
        if shape == "single" and self.get("filter", "enabled"):
            problems.append("filter: filtering requires sin4 pulses (sps > 1)")
        if shape == "sin4" and not self.get("filter", "enabled"):
            problems.append("filter: sin4 pulses require the receiver filter")
        if self.get("security", "detector_trust") not in ("trusted", "untrusted"):
            problems.append("security: detector_trust must be trusted or untrusted")
        if self.get("dsp", "phase_recovery") not in ("auto", "on", "off"):
            problems.append("dsp: phase_recovery must be auto, on, or off")
        if not 0.0 < self.get("security", "beta") <= 1.0:
            problems.append("security: beta must be in (0, 1]")
        if not 0.0 <= self.get("security", "nu_pe") < 1.0:
            problems.append("security: nu_pe must be in [0, 1)")
        if self.get("postproc", "enabled"):
            if self.get("receiver", "detection") != "heterodyne":
                problems.append("postproc: key extraction requires heterodyne detection")
            if self.get("postproc", "dimension") not in (1, 2, 4, 8):
                problems.append("postproc: dimension must be one of 1, 2, 4, 8")
        if self.get("pilot", "enabled") and self.get("laser", "linewidth") > 0:
            # unwrapping safety: expected |dphi| between pilots below pi/2
            var = (2.0 * 3.141592653589793 * self.get("laser", "linewidth")
                   / self.get("modulation", "symbol_rate")
                   * self.get("pilot", "pilot_every"))
            if 3.0 * var ** 0.5 > 1.5707963:
                problems.append("pilot: spacing too coarse for the linewidth (cycle slips)")
        return problems

    def require_valid(self):
        problems = self.validate()
        if problems:
            raise ScenarioError(problems)
        return self

    def to_text(self) -> str:
        """Serialize the resolved configuration (stable section/key order)."""
        out = io.StringIO()
        for sec in SECTIONS:
            out.write(f"[{sec}]\n")
            for (s, key), (typ, _default) in sorted(SCHEMA.items()):
                if s != sec:
                    continue
                val = self.values[(s, key)]
                if typ is bool:
                    val = "true" if val else "false"
                elif typ is float:
                    val = repr(float(val))
                out.write(f"{key} = {val}\n")
            out.write("\n")
        return out.getvalue()


def default_scenario() -> Scenario:
    return Scenario({k: v for k, (_t, v) in SCHEMA.items()})


def parse_scenario(text: str) -> Scenario:
    """Parse scenario text; unknown sections or keys are errors."""
    cp = configparser.ConfigParser(interpolation=None)
    cp.read_string(text)
    values = {k: v for k, (_t, v) in SCHEMA.items()}
    problems = []
    for sec in cp.sections():
        if sec == "sweep" or sec.startswith("sweep."):
            continue  # handled by the sweep loader
        for key, raw in cp.items(sec):
            if (sec, key) not in SCHEMA:
                problems.append(f"unknown key {sec}.{key}")
                continue
            typ, _ = SCHEMA[(sec, key)]
            try:
                values[(sec, key)] = _to_bool(raw) if typ is bool else typ(raw)
            except ValueError as err:
                problems.append(f"{sec}.{key}: {err}")
    if problems:
        raise ScenarioError(problems)
    return Scenario(values)


@dataclass(frozen=True)
class SweepDef:
    name: str
    param: str        # dotted section.key
    values: tuple


def parse_sweeps(text: str) -> list:
    """Extract [sweep] / [sweep.X] sections: param = section.key, values = csv."""
    cp = configparser.ConfigParser(interpolation=None)
    cp.read_string(text)
    sweeps = []
    for sec in cp.sections():
        if sec != "sweep" and not sec.startswith("sweep."):
            continue
        name = sec.partition(".")[2] or "sweep"
        param = cp.get(sec, "param")
        raw = cp.get(sec, "values")
        vals = tuple(float(v) for v in raw.replace(",", " ").split())
        sweeps.append(SweepDef(name=name, param=param, values=vals))
    return sweeps


def load_scenario(path) -> Scenario:
    return parse_scenario(Path(path).read_text())
