/** Figure layouts: which sweep panels each figure shows and how. */

import { MetricsRow, Scenario } from "./csv";
import * as theory from "./theory";

export interface SeriesSpec {
  field: keyof MetricsRow;
  stderrField?: keyof MetricsRow;
  name: string;
  /** theory overlay for this series, given the resolved scenario */
  theory?: (s: Scenario, x: number) => number;
}

export interface PanelSpec {
  sweepParam: string;
  xLabel: string;
  xScale?: (x: number) => number;
  yLabel: string;
  title: string;
  series: SeriesSpec[];
}

export type FigureId = "fig2" | "fig3" | "fig4" | "fig5" | "fig6";

const xiSeries = (
  fn?: (s: Scenario, x: number) => number,
): SeriesSpec => ({
  field: "xi_hat", stderrField: "xi_stderr", name: "excess noise xi (SNU)",
  theory: fn,
});

const teffSeries = (
  fn?: (s: Scenario, x: number) => number,
): SeriesSpec => ({
  field: "t_eff", stderrField: "t_eff_stderr", name: "effective transmittance T",
  theory: fn,
});

export const FIGURES: Record<FigureId, PanelSpec[]> = {
  fig2: [
    {
      sweepParam: "receiver.nep",
      xLabel: "NEP (pW/sqrt(Hz))", xScale: (x) => x * 1e12,
      yLabel: "xi (SNU)", title: "Excess noise vs receiver NEP",
      series: [xiSeries((s, x) => theory.xiOfNep(theory.linkParams(s), x))],
    },
    {
      // axis in 1e-21 W/Hz units: raw 1e-21-scale values break tick layout
      sweepParam: "channel.raman_psd",
      xLabel: "Raman PSD (1e-21 W/Hz)", xScale: (x) => x * 1e21,
      yLabel: "xi (SNU)", title: "Excess noise vs Raman noise density",
      series: [xiSeries((s, x) => theory.xiOfRaman(theory.linkParams(s), x))],
    },
    {
      sweepParam: "adc.bits",
      xLabel: "ADC resolution (bits)",
      yLabel: "xi (SNU)", title: "Excess noise vs ADC resolution",
      series: [xiSeries((s, x) => theory.xiOfAdcBits(theory.linkParams(s), x))],
    },
  ],
  fig3: [
    {
      sweepParam: "laser.rin_psd",
      xLabel: "RIN density (1e-12/Hz)", xScale: (x) => x * 1e12,
      yLabel: "T", title: "Effective transmittance vs laser RIN",
      series: [teffSeries((s, x) => theory.teffOfRin(theory.linkParams(s), x))],
    },
    {
      sweepParam: "laser.rin_psd",
      xLabel: "RIN density (1e-12/Hz)", xScale: (x) => x * 1e12,
      yLabel: "xi (SNU)", title: "Excess noise vs laser RIN",
      series: [xiSeries((s, x) => theory.xiOfRin(theory.linkParams(s), x))],
    },
  ],
  fig4: [
    {
      sweepParam: "receiver.nep",
      xLabel: "NEP (pW/sqrt(Hz))", xScale: (x) => x * 1e12,
      yLabel: "bits/symbol", title: "I_AB and chi_EB vs NEP",
      series: [
        { field: "i_ab", name: "I_AB (bits)",
          theory: (s, x) => theory.fig4Curves(theory.linkParams(s), "receiver.nep", x).iAb },
        { field: "chi_eb", name: "chi_EB (bits)",
          theory: (s, x) => theory.fig4Curves(theory.linkParams(s), "receiver.nep", x).chiEb },
      ],
    },
    {
      sweepParam: "channel.t_ch",
      xLabel: "channel transmittance T_ch",
      yLabel: "bits/symbol", title: "I_AB and chi_EB vs T_ch",
      series: [
        { field: "i_ab", name: "I_AB (bits)",
          theory: (s, x) => theory.fig4Curves(theory.linkParams(s), "channel.t_ch", x).iAb },
        { field: "chi_eb", name: "chi_EB (bits)",
          theory: (s, x) => theory.fig4Curves(theory.linkParams(s), "channel.t_ch", x).chiEb },
      ],
    },
    {
      sweepParam: "modulation.v_mod",
      xLabel: "modulation variance V_mod (SNU)",
      yLabel: "bits/symbol", title: "I_AB and chi_EB vs V_mod",
      series: [
        { field: "i_ab", name: "I_AB (bits)",
          theory: (s, x) => theory.fig4Curves(theory.linkParams(s), "modulation.v_mod", x).iAb },
        { field: "chi_eb", name: "chi_EB (bits)",
          theory: (s, x) => theory.fig4Curves(theory.linkParams(s), "modulation.v_mod", x).chiEb },
      ],
    },
  ],
  fig5: [
    {
      sweepParam: "filter.relative_bandwidth",
      xLabel: "filter bandwidth / symbol rate",
      yLabel: "T", title: "Effective transmittance vs relative bandwidth",
      series: [teffSeries()],
    },
    {
      sweepParam: "filter.relative_bandwidth",
      xLabel: "filter bandwidth / symbol rate",
      yLabel: "xi (SNU)", title: "Excess noise vs relative bandwidth",
      series: [xiSeries()],
    },
  ],
  fig6: [
    {
      sweepParam: "modulation.v_mod",
      xLabel: "modulation variance V_mod (SNU)",
      yLabel: "xi (SNU)", title: "Excess noise vs V_mod",
      series: [xiSeries()],
    },
    {
      sweepParam: "attenuation_db",
      xLabel: "signal attenuation (dB)",
      yLabel: "xi (SNU)", title: "Excess noise vs attenuation",
      series: [xiSeries()],
    },
  ],
};

export interface PanelData {
  spec: PanelSpec;
  rows: MetricsRow[];
}

/** Select the figure's panels that have data; error if none do. */
export function panelsFor(figure: FigureId, rows: MetricsRow[]): PanelData[] {
  const specs = FIGURES[figure];
  if (!specs) {
    throw new Error(`unknown figure id: ${figure}`);
  }
  const out: PanelData[] = [];
  const present = new Set(rows.map((r) => r.sweep_param));
  for (const spec of specs) {
    const sel = rows.filter((r) => r.sweep_param === spec.sweepParam);
    if (sel.length > 0) {
      sel.sort((a, b) => a.sweep_value - b.sweep_value);
      out.push({ spec, rows: sel });
    }
  }
  if (out.length === 0) {
    const want = specs.map((s) => s.sweepParam).join(", ");
    const got = [...present].join(", ") || "(none)";
    throw new Error(
      `no panel data for ${figure}: need sweep_param in {${want}}, CSV has {${got}}`);
  }
  return out;
}
