import numpy as np
import pytest

from cvqkdsim.constants import PLANCK
from cvqkdsim.dsp import calibrate_snu
from cvqkdsim.field import make_field, quadratures_to_amplitude
from cvqkdsim.rng import RandomStream
from cvqkdsim.rxchain import (AdcSpec, RawMeasurement, ReceiverSpec,
                              coherent_detect, quantize)
from cvqkdsim.txchain import ModulationSpec, draw_symbols, shape_pulses

FC = 193.4e12
FS = 1e9


def _vacuum(n=1 << 20):
    return make_field(np.zeros(n), FS, FC)


def test_rejects_empty_field():
    rx = ReceiverSpec()
    with pytest.raises(ValueError):
        coherent_detect(make_field([], FS, FC), rx, RandomStream(1, 7))


def test_vacuum_variance_is_one_snu():
    rx = ReceiverSpec(detection="homodyne_q", eta=1.0, nep=0.0, shot_model="gaussian")
    meas = coherent_detect(_vacuum(), rx, RandomStream(2, 7))
    scale = calibrate_snu(rx, FS, FC, RandomStream(2, 9), n_samples=1 << 22)
    var = float(np.mean(scale.to_snu(meas.values, "homodyne_q") ** 2))
    assert abs(var - 1.0) < 3.0 * np.sqrt(2.0 / (1 << 20))


def test_efficiency_slope_sqrt_eta():
    n = 1 << 19
    rx = ReceiverSpec(detection="homodyne_q", eta=0.7, nep=0.0, shot_model="gaussian")
    sym = draw_symbols(n, 5.0, RandomStream(3, 1))
    field = shape_pulses(sym, ModulationSpec(v_mod=5.0, symbol_rate=FS), FC)
    meas = coherent_detect(field, rx, RandomStream(3, 7))
    scale = calibrate_snu(rx, FS, FC, RandomStream(3, 9), n_samples=1 << 22)
    bob = scale.to_snu(meas.values, "homodyne_q")
    xa = sym.real
    slope = float(np.dot(xa, bob) / np.dot(xa, xa))
    stderr = 1.0 / np.sqrt(n * 5.0)
    assert abs(slope - np.sqrt(0.7)) < 3.0 * stderr


def test_heterodyne_vacuum_two_snu():
    rx = ReceiverSpec(detection="heterodyne", eta=1.0, nep=0.0, shot_model="gaussian")
    meas = coherent_detect(_vacuum(), rx, RandomStream(4, 7))
    scale = calibrate_snu(rx, FS, FC, RandomStream(4, 9), n_samples=1 << 22)
    vals = scale.to_snu(meas.values, "heterodyne")
    n = len(vals)
    for comp in (vals.real, vals.imag):
        assert abs(np.var(comp) - 2.0) < 3.0 * np.sqrt(2.0 / n) * 2.0


def test_poisson_gaussian_consistency():
    # at 1e4 LO photons/sample the two shot models agree on vacuum variance
    n = 1 << 20
    lo = PLANCK * FC * FS * 1e4
    res = {}
    for model in ("poisson", "gaussian"):
        rx = ReceiverSpec(detection="homodyne_q", eta=1.0, nep=0.0,
                          lo_power=lo, shot_model=model)
        meas = coherent_detect(_vacuum(n), rx, RandomStream(5, 7))
        scale = calibrate_snu(rx, FS, FC, RandomStream(5, 9), n_samples=1 << 21)
        res[model] = float(np.mean(scale.to_snu(meas.values, "homodyne_q") ** 2))
    tol = 3.0 * np.sqrt(2.0 / n) * 2.0
    assert abs(res["poisson"] - res["gaussian"]) < tol


def test_thermal_noise_matches_closed_form():
    # v_el = eta nep^2 / (2 h f_c P_LO) across a nep sweep
    for nep in (0.0, 1e-12, 2.82e-12, 5e-12):
        rx = ReceiverSpec(detection="homodyne_q", eta=0.7, nep=nep,
                          lo_power=10e-3, shot_model="gaussian")
        scale = calibrate_snu(rx, FS, FC, RandomStream(6, 9), n_samples=1 << 22)
        expect = rx.electronic_noise_snu(FC)
        tol = 3.0 * np.sqrt(2.0 / (1 << 22)) * (1.0 + 2.0 * expect) * 2.0
        assert abs(scale.v_el - expect) < max(tol, 1e-9)


def test_doubling_lo_power_halves_v_el():
    rx1 = ReceiverSpec(eta=0.7, nep=2.82e-12, lo_power=10e-3, shot_model="gaussian")
    rx2 = ReceiverSpec(eta=0.7, nep=2.82e-12, lo_power=20e-3, shot_model="gaussian")
    s1 = calibrate_snu(rx1, FS, FC, RandomStream(7, 9), n_samples=1 << 22)
    s2 = calibrate_snu(rx2, FS, FC, RandomStream(8, 9), n_samples=1 << 22)
    assert s2.v_el == pytest.approx(s1.v_el / 2.0, rel=0.05)


def test_efficiency_linearity():
    # doubling input power doubles the mean output in the Gaussian regime
    rx = ReceiverSpec(detection="homodyne_q", eta=0.5, nep=0.0, shot_model="gaussian")
    n = 1 << 18
    amp = quadratures_to_amplitude(np.full(n, 4.0 + 0j), FS, FC)
    f1 = make_field(amp, FS, FC)
    f2 = make_field(amp * np.sqrt(2.0), FS, FC)
    m1 = np.mean(coherent_detect(f1, rx, RandomStream(9, 7)).values)
    m2 = np.mean(coherent_detect(f2, rx, RandomStream(10, 7)).values)
    assert m2 / m1 == pytest.approx(np.sqrt(2.0), rel=0.01)


def _raw(values):
    rx = ReceiverSpec()
    return RawMeasurement(np.asarray(values, dtype=float), rx, FS, FC)


def test_quantize_rounding_rule():
    # delta = 0.25 via fixed full scale 1.0 with 3 bits: 2*1/8 = 0.25
    adc = AdcSpec(bits=3, full_scale=1.0)
    out = quantize(_raw([0.3]), adc)
    assert out.values[0] == pytest.approx(0.25)


def test_quantize_clipping():
    adc = AdcSpec(bits=3, full_scale=1.0)
    delta = 2.0 / 8.0
    out = quantize(_raw([10.0]), adc)
    assert out.values[0] == pytest.approx(1.0 - delta / 2.0)


def test_quantize_zero_input_unchanged():
    adc = AdcSpec(bits=8)
    with pytest.warns(UserWarning):
        out = quantize(_raw(np.zeros(16)), adc)
    np.testing.assert_array_equal(out.values, np.zeros(16))


def test_quantize_noise_model_high_resolution():
    # added variance <= delta^2/12 within 1% for bits >= 16, away from the
    # clip region (rare 5-sigma outliers are clipped by design)
    rng = np.random.default_rng(11)
    x = rng.standard_normal(1_000_000)
    adc = AdcSpec(bits=16, full_scale_sigma=5.0)
    out = quantize(_raw(x), adc)
    a = 5.0 * np.std(x)
    inside = np.abs(x) < a - 2e-4
    err = out.values[inside] - x[inside]
    delta = 2.0 * a / 2 ** 16
    assert np.var(err) <= delta ** 2 / 12.0 * 1.01
