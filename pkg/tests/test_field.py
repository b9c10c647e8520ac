import numpy as np
import pytest
from scipy.integrate import quad

from cvqkdsim.field import (SNU, add_awgn_optical, amplitude_to_quadratures,
                            make_field, mean_power, psd_to_snu_variance,
                            quadratures_to_amplitude, snu_variance_to_psd)
from cvqkdsim.rng import RandomStream


def test_make_field_empty():
    f = make_field([], 4e9, 193.4e12)
    assert len(f) == 0
    assert mean_power(f) == 0.0


def test_make_field_stores_samples_verbatim():
    s = np.array([1 + 2j, 3 - 4j])
    f = make_field(s, 1e9, 193.4e12)
    np.testing.assert_array_equal(f.samples, s)


def test_make_field_rejects_bad_rates():
    with pytest.raises(ValueError):
        make_field([1.0], 0.0, 193.4e12)
    with pytest.raises(ValueError):
        make_field([1.0], 1e9, -1.0)


def test_mean_power_constant():
    f = make_field(np.full(100, np.sqrt(1e-3)), 1e9, 193.4e12)
    assert mean_power(f) == pytest.approx(1e-3)
    f2 = make_field(np.full(1 << 20, 1.0 + 0j), 1e9, 193.4e12)
    assert len(f2) == 1 << 20
    assert mean_power(f2) == pytest.approx(1.0)


def test_mean_power_sin4_pulse():
    # time-average of sin^8 over one period is 35/128; checked against quadrature
    oracle, _ = quad(lambda t: np.sin(np.pi * t) ** 8, 0.0, 1.0)
    assert oracle == pytest.approx(35.0 / 128.0, rel=1e-10)
    a = 0.7
    n = 4096
    t = np.arange(n) / n
    f = make_field(a * np.sin(np.pi * t) ** 4, 1e9, 193.4e12)
    assert mean_power(f) == pytest.approx(a ** 2 * oracle, rel=1e-6)


def test_awgn_zero_psd_identity():
    f = make_field(np.ones(64), 1e9, 193.4e12)
    out = add_awgn_optical(f, 0.0, RandomStream(1, 1))
    np.testing.assert_array_equal(out.samples, f.samples)


def test_awgn_rejects_negative_psd():
    f = make_field(np.ones(4), 1e9, 193.4e12)
    with pytest.raises(ValueError):
        add_awgn_optical(f, -1e-18, RandomStream(1, 1))


def test_awgn_added_power_concentration():
    # added mean power = psd*f_s within 3*sqrt(2/n) relative
    psd, fs, n = 1e-16, 1e9, 1_000_000
    f = make_field(np.zeros(n), fs, 193.4e12)
    out = add_awgn_optical(f, psd, RandomStream(7, 5))
    added = mean_power(out)
    assert abs(added - psd * fs) <= 3.0 * np.sqrt(2.0 / n) * psd * fs


def test_awgn_determinism():
    f = make_field(np.ones(1000), 1e9, 193.4e12)
    a = add_awgn_optical(f, 1e-16, RandomStream(3, 4))
    b = add_awgn_optical(f, 1e-16, RandomStream(3, 4))
    np.testing.assert_array_equal(a.samples, b.samples)


def test_awgn_power_additivity():
    psd, fs, n = 2e-16, 2e9, 200_000
    f = make_field(np.full(n, 1e-8 + 0j), fs, 193.4e12)
    out = add_awgn_optical(f, psd, RandomStream(11, 5))
    expect = mean_power(f) + psd * fs
    assert abs(mean_power(out) - expect) <= 3.0 * np.sqrt(2.0 / n) * expect


def test_snu_photon_map():
    assert SNU.vacuum_variance == 1.0
    assert SNU.photon_number(2.0, 0.0) == pytest.approx(1.0)
    assert SNU.photon_number(1.0, 1.0) == pytest.approx(0.5)


def test_quadrature_amplitude_round_trip():
    fs, fc = 1e9, 193.4e12
    q = np.array([1.5 - 0.5j, -2.0 + 1.0j])
    a = quadratures_to_amplitude(q, fs, fc)
    back = amplitude_to_quadratures(a, fs, fc)
    np.testing.assert_allclose(back, q, rtol=1e-12)


def test_psd_snu_variance_round_trip():
    fc = 193.4e12
    var = psd_to_snu_variance(1e-22, fc)
    assert snu_variance_to_psd(var, fc) == pytest.approx(1e-22, rel=1e-12)
