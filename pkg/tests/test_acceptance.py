"""Acceptance suite: one test per release criterion, each printing a
PASS/FAIL line.  Tolerances are fixed here; presets carry the operating
points.  Sweep results are cached per session since several criteria
share them."""

import time

import numpy as np
import pytest

from cvqkdsim.constants import PLANCK
from cvqkdsim.field import psd_to_snu_variance
from cvqkdsim.harness.presets import preset_text
from cvqkdsim.harness.runner import emit_csv, run_scenario, run_sweep
from cvqkdsim.harness.scenario import parse_scenario, parse_sweeps

FC = 193.4e12


def report(name, ok, detail=""):
    print(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    assert ok, f"{name}: {detail}"


def load(name):
    text = preset_text(name)
    return parse_scenario(text), parse_sweeps(text)


def linreg(x, y):
    # covariance form: robust to arbitrarily scaled x (psd values ~1e-21)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    xc = x - x.mean()
    yc = y - y.mean()
    slope = float(np.dot(xc, yc) / np.dot(xc, xc))
    icpt = float(y.mean() - slope * x.mean())
    yhat = slope * x + icpt
    ss_res = float(np.sum((y - yhat) ** 2))
    ss_tot = float(np.sum(yc ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return slope, icpt, r2


@pytest.fixture(scope="session")
def sweep_cache():
    cache = {}

    def get(name):
        if name not in cache:
            scenario, sweeps = load(name)
            out = {}
            for sw in sweeps:
                out[sw.name] = run_sweep(scenario, sw.param, sw.values)
            cache[name] = out
        return cache[name]

    return get


def test_noise_free_baseline():
    scenario, _ = load("baseline")
    t0 = time.perf_counter()
    row = run_scenario(scenario)
    elapsed = time.perf_counter() - t0
    ok_t = abs(row.t_eff - 0.21) <= 0.21 * 0.005
    ok_xi = abs(row.xi_hat) <= 0.01
    ok_rt = elapsed < 10.0
    report("noise-free baseline",
           ok_t and ok_xi and ok_rt,
           f"T_eff={row.t_eff:.5f} (0.21 +-0.5%), xi={row.xi_hat:+.5f} "
           f"(+-0.01), runtime={elapsed:.1f}s (<10)")


def test_nep_study_fig2a(sweep_cache):
    rows = sweep_cache("fig2a_nep")["sweep"]
    eta, t_ch, lo = 0.7, 0.3, 10e-3
    details = []
    ok = True
    for row in rows:
        nep = row.sweep_value
        v_el_oracle = eta * nep ** 2 / (2.0 * PLANCK * FC * lo)
        xi_oracle = v_el_oracle / (eta * t_ch)
        ok_i = abs(row.xi_hat - xi_oracle) <= 3.0 * row.xi_stderr
        ok = ok and ok_i
        details.append(f"nep={nep*1e12:.2f}: xi={row.xi_hat:+.4f} vs {xi_oracle:.4f}")
    # v_el at NEP = 2.82 pW/sqrt(Hz): ~2.2e-3 within calibration statistics
    row282 = next(r for r in rows if abs(r.sweep_value - 2.82e-12) < 1e-15)
    v_oracle = eta * (2.82e-12) ** 2 / (2.0 * PLANCK * FC * lo)
    n_cal = 1 << 22
    v_tol = 3.0 * v_oracle * np.sqrt(4.0 / n_cal) * 2.0
    ok_v = abs(row282.v_el - v_oracle) <= v_tol
    report("NEP study (fig2a)", ok and ok_v,
           "; ".join(details) + f"; v_el={row282.v_el:.3e} vs {v_oracle:.3e}")


def test_adc_study_fig2c(sweep_cache):
    rows = sweep_cache("fig2c_adc")["sweep"]
    eta, t_ch, v_mod, k = 0.7, 0.3, 5.0, 5.0
    sigma2 = eta * t_ch * v_mod + 1.0
    bits = np.array([r.sweep_value for r in rows])
    xi = np.array([r.xi_hat for r in rows])
    model = (2.0 * k * np.sqrt(sigma2) / 2.0 ** bits) ** 2 / 12.0 / (eta * t_ch)
    slope, icpt, r2 = linreg(4.0 ** (-bits), xi)
    ok_r2 = r2 > 0.99
    row10 = rows[-1]
    ok10 = abs(row10.xi_hat - model[-1]) <= 3.0 * row10.xi_stderr
    report("ADC study (fig2c)", ok_r2 and ok10,
           f"R^2={r2:.4f} (>0.99), bits=10: xi={row10.xi_hat:+.5f} "
           f"vs model {model[-1]:.5f}")


def test_raman_study_fig2b(sweep_cache):
    rows = sweep_cache("fig2b_raman")["sweep"]
    t_ch = 0.3
    psd = np.array([r.sweep_value for r in rows])
    xi = np.array([r.xi_hat for r in rows])
    slope, icpt, r2 = linreg(psd, xi)
    oracle = 2.0 / (PLANCK * FC) / t_ch
    ok_r2 = r2 > 0.99
    ok_slope = abs(slope - oracle) <= 0.10 * oracle
    report("Raman study (fig2b)", ok_r2 and ok_slope,
           f"R^2={r2:.4f} (>0.99), slope={slope:.3e} vs {oracle:.3e} (+-10%)")


def rin_oracle(rin_psd, seed):
    """Independent closed-path Monte-Carlo of x_B = sqrt(eta T)(1+d/2)x_A + n."""
    rng = np.random.default_rng(seed)
    n = 1_000_000
    eta_t, v_mod, fs = 0.21, 5.0, 1e9
    var_d = rin_psd * fs / 2.0
    xa = rng.normal(0.0, np.sqrt(v_mod), n)
    delta = rng.normal(0.0, np.sqrt(var_d), n) if var_d > 0 else np.zeros(n)
    xb = np.sqrt(eta_t) * (1.0 + delta / 2.0) * xa + rng.standard_normal(n)
    slope = float(np.dot(xa, xb) / np.dot(xa, xa))
    t_eff = slope ** 2
    v_b = float(np.mean(xb ** 2))
    xi = (v_b - t_eff * v_mod - 1.0) / t_eff
    stderr_xi = v_b * np.sqrt(2.0 / n) / t_eff
    stderr_t = 2.0 * slope * np.sqrt((v_b - t_eff * v_mod) / (n * v_mod))
    return t_eff, xi, stderr_t, stderr_xi


def test_rin_study_fig3(sweep_cache):
    rows = sweep_cache("fig3_rin")["sweep"]
    ok = True
    details = []
    for i, row in enumerate(rows):
        t_o, xi_o, st_o, sxi_o = rin_oracle(row.sweep_value, seed=900 + i)
        tol_t = 3.0 * np.hypot(row.t_eff_stderr, st_o)
        tol_xi = 3.0 * np.hypot(row.xi_stderr, sxi_o)
        ok_i = (abs(row.t_eff - t_o) <= tol_t) and (abs(row.xi_hat - xi_o) <= tol_xi)
        ok = ok and ok_i
        details.append(f"rin={row.sweep_value:.1e}: T {row.t_eff:.4f}/{t_o:.4f} "
                       f"xi {row.xi_hat:+.4f}/{xi_o:+.4f}")
    report("RIN study (fig3)", ok, "; ".join(details))


def test_matched_filter_fig5(sweep_cache):
    t0 = time.perf_counter()
    rows = sweep_cache("fig5_filter")["sweep"]
    elapsed = time.perf_counter() - t0
    bw = np.array([r.sweep_value for r in rows])
    teff = np.array([r.t_eff for r in rows])
    imax = int(np.argmax(teff))
    ok_interior = 0 < imax < len(rows) - 1
    ok_loc = 0.7 <= bw[imax] <= 1.1
    ok_xi = all(abs(r.xi_hat) <= 3.0 * r.xi_stderr for r in rows
                if r.sweep_value >= 0.5)
    ok_rt = elapsed < 300.0
    report("matched filter (fig5)", ok_interior and ok_loc and ok_xi and ok_rt,
           f"argmax at {bw[imax]:.2f} R_s (in [0.7,1.1]), "
           f"T_eff max={teff[imax]:.4f}, runtime={elapsed:.0f}s (<300)")


def test_phase_recovery_fig6():
    scenario, _ = load("fig6_phase")
    ok = True
    details = []
    for v_mod in (1.0, 5.0, 10.0):
        for att_db in (0.0, 10.0, 20.0):
            s = scenario.with_override("modulation", "v_mod", v_mod)
            s = s.with_override("channel", "length_km", att_db / 0.2)
            rec = run_scenario(s)
            base = s.with_override("laser", "linewidth", 0.0)
            base = base.with_override("dsp", "phase_recovery", "off")
            ref = run_scenario(base)
            added = rec.xi_hat - ref.xi_hat
            ok_i = added < 0.005
            ok = ok and ok_i
            details.append(f"V={v_mod:g},att={att_db:g}dB: +{added:.5f}")
    report("phase recovery (fig6)", ok, "; ".join(details) + " (< 0.005)")


def test_security_oracle_equivalence():
    from cvqkdsim.security import (SecurityParams, build_link_state,
                                   holevo_bound,
                                   holevo_untrusted_closed_form, is_physical)
    t0 = time.perf_counter()
    rng = np.random.default_rng(77)
    worst = 0.0
    physical = True
    for _ in range(50):
        vm = float(rng.uniform(0.1, 20.0))
        t = float(rng.uniform(0.05, 1.0))
        xi = float(rng.uniform(0.0, 0.2))
        det = "homodyne" if rng.integers(2) else "heterodyne"
        p = SecurityParams(v_mod=vm, T=t, xi=xi, eta=1.0, v_el=0.0, detection=det)
        worst = max(worst, abs(holevo_bound(p)
                               - holevo_untrusted_closed_form(vm, t, xi, det)))
        p2 = SecurityParams(v_mod=vm, T=t, xi=xi,
                            eta=float(rng.uniform(0.3, 1.0)),
                            v_el=float(rng.uniform(0.0, 0.1)), detection=det)
        _, full, _ = build_link_state(p2)
        physical = physical and is_physical(full)
    elapsed = time.perf_counter() - t0
    report("security oracle equivalence",
           worst < 1e-9 and physical and elapsed < 5.0,
           f"worst |diff|={worst:.2e} (<1e-9), physical={physical}, "
           f"runtime={elapsed:.2f}s (<5)")


def test_fig4_qualitative(sweep_cache):
    sweeps = sweep_cache("fig4_sweeps")
    # (a) NEP: I_AB strictly decreasing, chi_EB strictly increasing
    rows = sweeps["nep"]
    i_ab = [r.i_ab for r in rows]
    chi = [r.chi_eb for r in rows]
    ok_a = (all(b < a for a, b in zip(i_ab, i_ab[1:]))
            and all(b > a for a, b in zip(chi, chi[1:])))
    # (b) T_ch: both increase; chi > I at T = 0.05
    rows = sweeps["t_ch"]
    i_ab = [r.i_ab for r in rows]
    chi = [r.chi_eb for r in rows]
    ok_b = (all(b > a for a, b in zip(i_ab, i_ab[1:]))
            and all(b > a for a, b in zip(chi, chi[1:]))
            and chi[0] > i_ab[0])
    # (c) key-fraction maximizer over V_mod in [2, 10]
    rows = sweeps["v_mod"]
    skf = [r.skf_analytic for r in rows]
    v_opt = rows[int(np.argmax(skf))].sweep_value
    ok_c = 2.0 <= v_opt <= 10.0
    report("fig4 qualitative", ok_a and ok_b and ok_c,
           f"(a) monotone={ok_a}; (b) monotone+crossing={ok_b} "
           f"(chi={chi[0]:.4f} > I={i_ab[0]:.4f} at T=0.05); "
           f"(c) argmax V_mod={v_opt:g} (in [2,10])")


def test_sec6_key_extraction():
    scenario, _ = load("sec6_key")
    t0 = time.perf_counter()
    extras = {}
    row = run_scenario(scenario, extras=extras)
    elapsed = time.perf_counter() - t0
    kr = extras["key_result"]
    ok_match = kr.keys_match and kr.frames_undetected == 0
    ok_skf = 0.05 <= row.skf_measured <= 0.15
    ok_rt = elapsed < 600.0
    report("sec6 key extraction", ok_match and ok_skf and ok_rt,
           f"skf={row.skf_measured:.4f} (in [0.05,0.15]), FER={kr.fer:.3f}, "
           f"beta_achieved={kr.beta_achieved:.3f}, frames={kr.frames_total}, "
           f"keys_match={kr.keys_match}, runtime={elapsed:.0f}s (<600)")


def test_determinism_byte_identical_csv(tmp_path):
    scenario, sweeps = load("fig2a_nep")
    scenario = scenario.with_override("run", "n_symbols", 1 << 15)
    scenario = scenario.with_override("dsp", "calibration_samples", 1 << 17)
    sw = sweeps[0]
    paths = []
    for i in (1, 2):
        rows = run_sweep(scenario, sw.param, sw.values)
        p = tmp_path / f"metrics_{i}.csv"
        emit_csv(rows, p)
        paths.append(p)
    def strip_runtime(text):
        return "\n".join(",".join(line.split(",")[:-1])
                         for line in text.strip().split("\n"))
    a = strip_runtime(paths[0].read_text())
    b = strip_runtime(paths[1].read_text())
    report("determinism", a == b, "byte-identical metrics.csv modulo runtime")
