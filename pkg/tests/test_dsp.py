import numpy as np
import pytest
from scipy.integrate import quad

from cvqkdsim.dsp import (CalibrationError, FilterSpec, InsufficientPilotsError,
                          calibrate_snu, extract_symbols,
                          filter_noise_bandwidth_ratio, find_timing_offset,
                          gaussian_lowpass, phase_recover)
from cvqkdsim.rng import RandomStream
from cvqkdsim.rxchain import ReceiverSpec
from cvqkdsim.txchain import ModulationSpec, draw_symbols, shape_pulses

FC = 193.4e12


def test_filter_dc_gain_unity():
    spec = FilterSpec(f3db=1e8)
    x = np.full(4096, 3.7)
    y = gaussian_lowpass(x, spec, 1e9)
    np.testing.assert_allclose(y, x, rtol=1e-9)


def test_filter_half_power_at_f3db():
    spec = FilterSpec(f3db=2.2e8)
    assert spec.magnitude(2.2e8) ** 2 == pytest.approx(0.5, rel=1e-12)


def test_filter_white_noise_bandwidth_oracle():
    # variance ratio out/in = (1/(fs/2)) * int_0^{fs/2} |H|^2 df, quadrature oracle
    rs = 250e6
    sps = 16
    fs = rs * sps
    spec = FilterSpec.from_relative(0.9, rs)
    oracle = quad(lambda f: spec.magnitude(f) ** 2, 0.0, fs / 2.0)[0] / (fs / 2.0)
    assert filter_noise_bandwidth_ratio(spec, fs) == pytest.approx(oracle, rel=1e-3)
    rng = np.random.default_rng(5)
    x = rng.standard_normal(1 << 20)
    y = gaussian_lowpass(x, spec, fs)
    assert np.var(y) / np.var(x) == pytest.approx(oracle, rel=0.01)


def test_filter_linearity_and_cyclic_shift():
    spec = FilterSpec(f3db=1e8)
    rng = np.random.default_rng(6)
    x = rng.standard_normal(1024)
    y = gaussian_lowpass(x, spec, 1e9)
    np.testing.assert_allclose(gaussian_lowpass(2.5 * x, spec, 1e9), 2.5 * y,
                               rtol=1e-10)
    shift = 37
    y_shift = gaussian_lowpass(np.roll(x, shift), spec, 1e9)
    np.testing.assert_allclose(y_shift, np.roll(y, shift), atol=1e-10)


def test_extract_symbols_and_offset_bounds():
    vals = np.arange(32, dtype=float)
    out = extract_symbols(vals, 16, 7)
    np.testing.assert_array_equal(out, [7.0, 23.0])
    with pytest.raises(ValueError):
        extract_symbols(vals, 16, 16)
    with pytest.warns(UserWarning):
        extract_symbols(np.arange(33, dtype=float), 16, 0)


def test_noiseless_pulse_recovery_correlation():
    mod = ModulationSpec(v_mod=2.0, symbol_rate=250e6, samples_per_symbol=16,
                         pulse_shape="sin4")
    sym = draw_symbols(2000, 2.0, RandomStream(8, 1))
    field = shape_pulses(sym, mod, FC)
    spec = FilterSpec.from_relative(3.0, mod.symbol_rate)
    filtered = gaussian_lowpass(field.samples, spec, field.sample_rate)
    off = find_timing_offset(filtered, 16, sym)
    got = extract_symbols(filtered, 16, off)
    corr = np.corrcoef(got.real, sym.real)[0, 1]
    assert corr > 0.999


def test_calibration_idempotent_and_nep_zero():
    rx = ReceiverSpec(detection="homodyne_q", eta=0.7, nep=0.0, shot_model="gaussian")
    a = calibrate_snu(rx, 1e9, FC, RandomStream(4, 9), n_samples=1 << 20)
    b = calibrate_snu(rx, 1e9, FC, RandomStream(4, 9), n_samples=1 << 20)
    assert a.shot_variance_raw == b.shot_variance_raw
    assert a.dark_variance_raw == 0.0
    assert a.v_el == 0.0


def test_calibration_v_el_formula():
    rx = ReceiverSpec(detection="homodyne_q", eta=0.7, nep=2.82e-12,
                      lo_power=10e-3, shot_model="gaussian")
    scale = calibrate_snu(rx, 1e9, FC, RandomStream(5, 9), n_samples=1 << 22)
    expect = rx.electronic_noise_snu(FC)
    assert expect == pytest.approx(2.2e-3, rel=0.02)
    assert scale.v_el == pytest.approx(expect, rel=0.05)


def test_vacuum_variance_one_plus_v_el():
    from cvqkdsim.field import make_field
    from cvqkdsim.rxchain import coherent_detect
    rx = ReceiverSpec(detection="homodyne_q", eta=0.7, nep=2.82e-12,
                      lo_power=10e-3, shot_model="gaussian")
    n = 1 << 20
    vac = make_field(np.zeros(n), 1e9, FC)
    meas = coherent_detect(vac, rx, RandomStream(6, 7))
    scale = calibrate_snu(rx, 1e9, FC, RandomStream(6, 9), n_samples=1 << 22)
    var = float(np.mean(scale.to_snu(meas.values, "homodyne_q") ** 2))
    expect = 1.0 + scale.v_el
    assert abs(var - expect) < 3.0 * np.sqrt(2.0 / n) * expect


def test_phase_recover_requires_two_pilots():
    with pytest.raises(InsufficientPilotsError):
        phase_recover(np.ones(8, dtype=complex), [0], 20.0)


def test_phase_recover_static_offset():
    # known static rotation recovered within the pilot-noise bound
    rng = np.random.default_rng(9)
    n = 4096
    k = 4
    amp = 200.0
    phi0 = 0.7
    sym = np.zeros(n, dtype=complex)
    positions = np.arange(0, n, k)
    quantum = rng.normal(size=n - len(positions)) + 1j * rng.normal(size=n - len(positions))
    mask = np.ones(n, dtype=bool)
    mask[positions] = False
    sym[positions] = amp
    sym[mask] = quantum
    noisy = sym * np.exp(1j * phi0) + (rng.normal(size=n) + 1j * rng.normal(size=n))
    corrected, track = phase_recover(noisy, positions, amp)
    sigma_pilot = 1.0 / amp
    resid = np.angle(np.exp(1j * (track - phi0)))
    assert abs(resid.mean()) < 3.0 * sigma_pilot
    # corrected quantum symbols match the originals up to measurement noise
    err = corrected - quantum * np.exp(1j * 0.0)
    assert np.std(err.real) < 1.5


def test_phase_recover_zero_linewidth_adds_no_noise():
    rng = np.random.default_rng(10)
    n = 4096
    k = 4
    amp = 2000.0
    positions = np.arange(0, n, k)
    mask = np.ones(n, dtype=bool)
    mask[positions] = False
    quantum = rng.normal(size=mask.sum()) + 1j * rng.normal(size=mask.sum())
    sym = np.empty(n, dtype=complex)
    sym[positions] = amp
    sym[mask] = quantum
    noise = rng.normal(size=n) + 1j * rng.normal(size=n)
    corrected, _ = phase_recover(sym + noise, positions, amp)
    baseline = (sym + noise)[mask]
    added = np.var((corrected - baseline).real) + np.var((corrected - baseline).imag)
    assert added < 1e-3 * np.var(baseline.real)
