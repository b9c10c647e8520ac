import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from cvqkdsim.harness.presets import PRESET_NAMES, preset_text
from cvqkdsim.harness.runner import (CSV_COLUMNS, emit_csv, run_scenario,
                                     run_sweep, schema_hash)
from cvqkdsim.harness.scenario import (ScenarioError, default_scenario,
                                       load_scenario, parse_scenario,
                                       parse_sweeps)


def small_scenario(**overrides):
    s = parse_scenario(preset_text("baseline"))
    s = s.with_override("run", "n_symbols", 1 << 16)
    s = s.with_override("dsp", "calibration_samples", 1 << 18)
    for k, v in overrides.items():
        sec, _, key = k.partition("__")
        s = s.with_override(sec, key, v)
    return s


def test_parse_scenario_defaults_and_overrides():
    s = parse_scenario("[run]\nn_symbols = 4096\n")
    assert s.n_symbols == 4096
    assert s.get("receiver", "eta") == 0.7
    assert s.get("modulation", "v_mod") == 5.0


def test_parse_scenario_unknown_key_rejected():
    with pytest.raises(ScenarioError):
        parse_scenario("[run]\nbogus_key = 1\n")
    with pytest.raises(ScenarioError):
        parse_scenario("[bogus_section]\nx = 1\n")


def test_validation_collects_all_problems():
    s = default_scenario()
    s = s.with_override("pilot", "enabled", True)          # needs heterodyne
    s = s.with_override("modulation", "pulse_shape", "sin4")
    s = s.with_override("modulation", "samples_per_symbol", 16)
    problems = s.validate()
    assert len(problems) >= 2
    with pytest.raises(ScenarioError) as err:
        s.require_valid()
    assert len(err.value.problems) == len(problems)


def test_resolved_round_trip():
    s = small_scenario()
    text = s.to_text()
    s2 = parse_scenario(text)
    assert s2.values == s.values


def test_preset_sweep_sections():
    sweeps = parse_sweeps(preset_text("fig2a_nep"))
    assert len(sweeps) == 1
    assert sweeps[0].param == "receiver.nep"
    assert len(sweeps[0].values) == 5
    assert len(parse_sweeps(preset_text("fig4_sweeps"))) == 3


def test_all_presets_parse_and_validate():
    for name in PRESET_NAMES:
        s = parse_scenario(preset_text(name))
        assert s.validate() == [], name


def test_run_scenario_deterministic():
    s = small_scenario()
    r1 = run_scenario(s)
    r2 = run_scenario(s)
    assert r1.t_eff == r2.t_eff
    assert r1.xi_hat == r2.xi_hat


def test_noise_free_reference_point():
    s = small_scenario()
    row = run_scenario(s)
    assert abs(row.t_eff - 0.21) < 3.0 * row.t_eff_stderr
    assert abs(row.xi_hat) < 3.0 * row.xi_stderr


def test_toggle_isolation_adc():
    # enabling only the ADC raises xi but leaves T_eff within 3 sigma
    base = small_scenario()
    row0 = run_scenario(base)
    s = base.with_override("toggles", "adc", True)
    s = s.with_override("adc", "enabled", True)
    s = s.with_override("adc", "bits", 4)
    row1 = run_scenario(s)
    assert row1.xi_hat != row0.xi_hat       # the toggle actually acted
    assert abs(row1.t_eff - row0.t_eff) < 3.0 * row0.t_eff_stderr
    assert row1.xi_hat > row0.xi_hat + 3.0 * row0.xi_stderr


def test_toggle_master_switch_overrides_config():
    s = small_scenario()
    s = s.with_override("receiver", "nep", 2.82e-12)
    s = s.with_override("toggles", "thermal", False)
    row = run_scenario(s)
    assert row.v_el == 0.0


def test_run_sweep_counts_and_parallel_independence():
    s = small_scenario()
    s = s.with_override("run", "n_symbols", 1 << 14)
    s = s.with_override("dsp", "calibration_samples", 1 << 16)
    values = [0.1, 0.2, 0.3]
    rows = run_sweep(s, "channel.t_ch", values)
    assert len(rows) == 3
    assert [r.sweep_value for r in rows] == values
    rows_par = run_sweep(s, "channel.t_ch", values, jobs=2)
    for a, b in zip(rows, rows_par):
        assert a.t_eff == b.t_eff and a.xi_hat == b.xi_hat


def test_run_sweep_unknown_param():
    with pytest.raises(ScenarioError):
        run_sweep(small_scenario(), "receiver.bogus", [1.0])


def test_emit_csv_round_trip(tmp_path):
    s = small_scenario()
    s = s.with_override("run", "n_symbols", 1 << 14)
    s = s.with_override("dsp", "calibration_samples", 1 << 16)
    rows = run_sweep(s, "channel.t_ch", [0.2, 0.4])
    path = tmp_path / "metrics.csv"
    emit_csv(rows, path)
    lines = path.read_text().strip().split("\n")
    assert lines[0] == ",".join(CSV_COLUMNS)
    assert len(lines) == 3
    # 17-significant-digit round trip
    got = float(lines[1].split(",")[CSV_COLUMNS.index("t_eff")])
    assert got == rows[0].t_eff
    assert len(schema_hash()) == 16


def _cli(*args):
    return subprocess.run([sys.executable, "-m", "cvqkdsim.harness.cli", *args],
                          capture_output=True, text=True)


def test_cli_presets_list():
    res = _cli("presets", "--list")
    assert res.returncode == 0
    assert "fig5_filter" in res.stdout


def test_cli_validation_exit_code(tmp_path):
    bad = tmp_path / "bad.scn"
    bad.write_text("[pilot]\nenabled = true\n")
    res = _cli("run", "--scenario", str(bad), "--out", str(tmp_path / "o"))
    assert res.returncode == 2


def test_cli_run_writes_outputs(tmp_path):
    scn = tmp_path / "tiny.scn"
    scn.write_text(
        "[run]\nn_symbols = 16384\nmaster_seed = 5\n"
        "[channel]\nt_ch = 0.3\n[receiver]\neta = 0.7\n"
        "[dsp]\ncalibration_samples = 65536\n")
    out = tmp_path / "out"
    res = _cli("run", "--scenario", str(scn), "--out", str(out))
    assert res.returncode == 0, res.stderr
    assert (out / "metrics.csv").exists()
    assert (out / "scenario.resolved").exists()
    resolved = (out / "scenario.resolved").read_text()
    assert "[receiver]" in resolved and "eta = 0.7" in resolved
