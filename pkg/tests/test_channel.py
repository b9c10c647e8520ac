import numpy as np
import pytest

from cvqkdsim.channel import (ChannelSpec, attenuate, inject_raman, propagate,
                              transmittance)
from cvqkdsim.field import make_field, mean_power, psd_to_snu_variance
from cvqkdsim.rng import RandomStream
from cvqkdsim.rxchain import ReceiverSpec, coherent_detect
from cvqkdsim.dsp import calibrate_snu

FC = 193.4e12


def test_transmittance_values():
    assert transmittance(0.0, 0.2) == 1.0
    assert transmittance(50.0, 0.2) == pytest.approx(0.1, rel=1e-12)
    assert transmittance(15.0, 0.2) == pytest.approx(10 ** -0.3, rel=1e-12)


def test_transmittance_monotone():
    lengths = np.linspace(0, 100, 11)
    ts = [transmittance(L, 0.2) for L in lengths]
    assert all(a > b for a, b in zip(ts, ts[1:]))
    atts = np.linspace(0.1, 0.5, 5)
    ts = [transmittance(50.0, a) for a in atts]
    assert all(a > b for a, b in zip(ts, ts[1:]))


def test_attenuate_scaling():
    f = make_field(np.full(1000, 2.0 + 1j), 1e9, FC)
    assert attenuate(f, 1.0) is f
    assert mean_power(attenuate(f, 0.0)) == 0.0
    assert mean_power(attenuate(f, 0.5)) == pytest.approx(0.5 * mean_power(f), rel=1e-12)
    with pytest.raises(ValueError):
        attenuate(f, 1.5)


def test_inject_raman_zero_identity():
    f = make_field(np.ones(16), 1e9, FC)
    out = inject_raman(f, 0.0, RandomStream(1, 5))
    np.testing.assert_array_equal(out.samples, f.samples)


def test_raman_snu_variance_through_ideal_receiver():
    # vacuum + PSD S -> quadrature variance 1 + 2 S/(h f_c) within 3 sigma
    fs, n = 1e9, 1 << 20
    psd = 8e-22
    vac = make_field(np.zeros(n), fs, FC)
    noisy = inject_raman(vac, psd, RandomStream(21, 5))
    rx = ReceiverSpec(detection="homodyne_q", eta=1.0, nep=0.0, shot_model="gaussian")
    meas = coherent_detect(noisy, rx, RandomStream(21, 7))
    scale = calibrate_snu(rx, fs, FC, RandomStream(21, 9), n_samples=1 << 22)
    var = float(np.mean(scale.to_snu(meas.values, "homodyne_q") ** 2))
    expect = 1.0 + psd_to_snu_variance(psd, FC)
    assert abs(var - expect) < 3.0 * np.sqrt(2.0 / n) * expect


def test_raman_phase_insensitive():
    fs, n = 1e9, 1 << 20
    vac = make_field(np.zeros(n), fs, FC)
    noisy = inject_raman(vac, 1e-21, RandomStream(22, 5))
    vq = np.var(noisy.samples.real)
    vp = np.var(noisy.samples.imag)
    assert abs(vq - vp) < 3.0 * np.sqrt(2.0 / n) * (vq + vp)


def test_propagation_order_noise_after_attenuation():
    # the implemented order injects noise at the channel output
    n = 1 << 16
    f = make_field(np.full(n, 1e-9 + 0j), 1e9, FC)
    spec = ChannelSpec(mode="fixed_T", t_ch=0.25, raman_psd=1e-21)
    out = propagate(f, spec, RandomStream(3, 5))
    sig = attenuate(f, 0.25)
    noise_power = mean_power(out) - mean_power(sig)
    expect = 1e-21 * 1e9
    assert noise_power == pytest.approx(expect, rel=0.05)


def test_channel_spec_validation():
    with pytest.raises(ValueError):
        ChannelSpec(mode="bogus")
    with pytest.raises(ValueError):
        ChannelSpec(t_ch=1.5)
    with pytest.raises(ValueError):
        ChannelSpec(raman_psd=-1.0)
    spec = ChannelSpec(mode="fibre", length_km=50.0, attenuation_db_km=0.2)
    assert spec.transmittance_value == pytest.approx(0.1, rel=1e-12)
