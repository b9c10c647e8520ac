/** Metrics CSV loading and the resolved-scenario key=value format. */

import * as fs from "fs";

export interface MetricsRow {
  label: string;
  sweep_param: string;
  sweep_value: number;
  n_symbols: number;
  point_seed: number;
  t_eff: number;
  t_eff_stderr: number;
  xi_hat: number;
  xi_stderr: number;
  v_el: number;
  i_ab: number;
  chi_eb: number;
  skf_analytic: number;
  fer: number;
  beta_achieved: number;
  skf_measured: number;
  runtime_s: number;
}

const NUMERIC = new Set([
  "sweep_value", "n_symbols", "point_seed", "t_eff", "t_eff_stderr",
  "xi_hat", "xi_stderr", "v_el", "i_ab", "chi_eb", "skf_analytic",
  "fer", "beta_achieved", "skf_measured", "runtime_s",
]);

export function parseCsv(text: string): MetricsRow[] {
  const lines = text.trim().split(/\r?\n/).filter((l) => l.length > 0);
  if (lines.length === 0) {
    throw new Error("empty CSV");
  }
  const header = lines[0].split(",");
  const rows: MetricsRow[] = [];
  for (const line of lines.slice(1)) {
    const parts = line.split(",");
    if (parts.length !== header.length) {
      throw new Error(`ragged CSV row: ${line}`);
    }
    const row: Record<string, string | number> = {};
    header.forEach((name, i) => {
      row[name] = NUMERIC.has(name) ? Number(parts[i]) : parts[i];
    });
    rows.push(row as unknown as MetricsRow);
  }
  if (rows.length === 0) {
    throw new Error("CSV has a header but no data rows");
  }
  return rows;
}

export function loadCsvs(paths: string[]): MetricsRow[] {
  const rows: MetricsRow[] = [];
  for (const p of paths) {
    rows.push(...parseCsv(fs.readFileSync(p, "utf8")));
  }
  return rows;
}

/** Resolved scenario: INI-style sections of key = value. */
export type Scenario = Map<string, string>;

export function parseScenario(text: string): Scenario {
  const out: Scenario = new Map();
  let section = "";
  for (const raw of text.split(/\r?\n/)) {
    const line = raw.trim();
    if (!line || line.startsWith("#") || line.startsWith(";")) continue;
    const sec = line.match(/^\[(.+)\]$/);
    if (sec) {
      section = sec[1];
      continue;
    }
    const kv = line.match(/^([^=]+)=(.*)$/);
    if (kv) {
      out.set(`${section}.${kv[1].trim()}`, kv[2].trim());
    }
  }
  return out;
}

export function loadScenario(path: string): Scenario {
  return parseScenario(fs.readFileSync(path, "utf8"));
}

export function scenarioNumber(s: Scenario, key: string, fallback?: number): number {
  const v = s.get(key);
  if (v === undefined) {
    if (fallback !== undefined) return fallback;
    throw new Error(`scenario key missing: ${key}`);
  }
  const num = Number(v);
  if (!Number.isFinite(num)) throw new Error(`scenario key not numeric: ${key}=${v}`);
  return num;
}
