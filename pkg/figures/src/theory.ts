/** Analytic oracle curves, recomputed from the resolved scenario echo
 * rather than trusted from CSV columns. */

import { Scenario, scenarioNumber } from "./csv";

export const PLANCK = 6.62607015e-34;

export interface LinkParams {
  vMod: number;
  tCh: number;
  eta: number;
  nep: number;
  loPower: number;
  fc: number;
  symbolRate: number;
  adcBits: number;
  adcK: number;
  detection: string;
  beta: number;
  nuPe: number;
  trust: string;
}

export function linkParams(s: Scenario): LinkParams {
  const mode = s.get("channel.mode") ?? "fixed_T";
  let tCh = scenarioNumber(s, "channel.t_ch", 1.0);
  if (mode === "fibre") {
    const len = scenarioNumber(s, "channel.length_km", 0);
    const att = scenarioNumber(s, "channel.attenuation_db_km", 0.2);
    tCh = Math.pow(10, (-att * len) / 10);
  }
  return {
    vMod: scenarioNumber(s, "modulation.v_mod"),
    tCh,
    eta: scenarioNumber(s, "receiver.eta"),
    nep: scenarioNumber(s, "receiver.nep", 0),
    loPower: scenarioNumber(s, "receiver.lo_power", 10e-3),
    fc: scenarioNumber(s, "receiver.carrier_frequency", 193.4e12),
    symbolRate: scenarioNumber(s, "modulation.symbol_rate"),
    adcBits: scenarioNumber(s, "adc.bits", 8),
    adcK: scenarioNumber(s, "adc.full_scale_sigma", 5),
    detection: s.get("security.detection") === "heterodyne"
      || s.get("receiver.detection") === "heterodyne" ? "heterodyne" : "homodyne",
    beta: scenarioNumber(s, "security.beta", 0.95),
    nuPe: scenarioNumber(s, "security.nu_pe", 0.1),
    trust: s.get("security.detector_trust") ?? "trusted",
  };
}

export function vElOfNep(p: LinkParams, nep: number): number {
  return (p.eta * nep * nep) / (2 * PLANCK * p.fc * p.loPower);
}

/** fig2a: xi(NEP) with electronic noise attributed to the channel. */
export function xiOfNep(p: LinkParams, nep: number): number {
  return vElOfNep(p, nep) / (p.eta * p.tCh);
}

/** fig2b: xi(S) for Raman PSD S at the channel output. */
export function xiOfRaman(p: LinkParams, psd: number): number {
  return (2 * psd) / (PLANCK * p.fc) / p.tCh;
}

/** fig2c: xi(bits) from the quantization-noise model. */
export function xiOfAdcBits(p: LinkParams, bits: number): number {
  const sigma2 = p.eta * p.tCh * p.vMod + 1;
  const delta = (2 * p.adcK * Math.sqrt(sigma2)) / Math.pow(2, bits);
  return (delta * delta) / 12 / (p.eta * p.tCh);
}

/** fig3: T_eff and xi under white RIN of the given one-sided density. */
export function teffOfRin(p: LinkParams, rin: number): number {
  const varD = (rin * p.symbolRate) / 2;
  const slope = 1 - varD / 8;
  return p.eta * p.tCh * slope * slope;
}

export function xiOfRin(p: LinkParams, rin: number): number {
  const varD = (rin * p.symbolRate) / 2;
  const slope2 = Math.pow(1 - varD / 8, 2);
  return (p.vMod * (1 - slope2)) / slope2;
}

/** Bosonic entropy kernel, bits. */
export function gEntropy(nu: number): number {
  if (nu <= 1 + 1e-12) return 0;
  const up = (nu + 1) / 2;
  const dn = (nu - 1) / 2;
  return up * Math.log2(up) - dn * Math.log2(dn);
}

/** Untrusted two-mode closed form for chi_EB. */
export function holevoUntrusted(vMod: number, T: number, xi: number,
                                detection: string): number {
  const a = vMod + 1;
  const b = T * (a - 1) + 1 + T * xi;
  const c2 = T * (a * a - 1);
  const delta = a * a + b * b - 2 * c2;
  const d = a * b - c2;
  const root = Math.sqrt(Math.max(delta * delta - 4 * d * d, 0));
  const nu1 = Math.sqrt((delta + root) / 2);
  const nu2 = Math.sqrt((delta - root) / 2);
  const nu3 = detection === "heterodyne"
    ? a - c2 / (b + 1)
    : Math.sqrt(a * (a - c2 / b));
  return gEntropy(nu1) + gEntropy(nu2) - gEntropy(nu3);
}

export function mutualInformation(p: LinkParams, vMod: number, tCh: number,
                                  xi: number, vEl: number): number {
  if (p.detection === "heterodyne") {
    const snr = (0.5 * p.eta * tCh * vMod) / (1 + vEl + 0.5 * p.eta * tCh * xi);
    return Math.log2(1 + snr);
  }
  const snr = (p.eta * tCh * vMod) / (1 + vEl + p.eta * tCh * xi);
  return 0.5 * Math.log2(1 + snr);
}

/** fig4 overlays: I_AB and chi_EB as the swept parameter varies. */
export function fig4Curves(p: LinkParams, param: string, value: number):
    { iAb: number; chiEb: number } {
  let vMod = p.vMod;
  let tCh = p.tCh;
  let nep = p.nep;
  if (param === "modulation.v_mod") vMod = value;
  else if (param === "channel.t_ch") tCh = value;
  else if (param === "receiver.nep") nep = value;
  const vEl = vElOfNep(p, nep);
  const half = p.detection === "heterodyne" ? 0.5 : 1.0;
  const iAb = mutualInformation(p, vMod, tCh, 0, vEl);
  let chiEb: number;
  if (p.trust === "untrusted") {
    const xiU = vEl / (half * p.eta * tCh);
    chiEb = holevoUntrusted(vMod, p.eta * tCh, xiU, p.detection);
  } else {
    // trusted chi has no closed form here; untrusted is the overlay default
    chiEb = holevoUntrusted(vMod, p.eta * tCh, vEl / (half * p.eta * tCh),
                            p.detection);
  }
  return { iAb, chiEb };
}
