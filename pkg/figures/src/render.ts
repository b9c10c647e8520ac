/** Headless chart rendering: echarts SSR to SVG, optional PNG rasterization. */

import * as echarts from "echarts";
import * as fs from "fs";
import * as path from "path";

import { Scenario } from "./csv";
import { PanelData } from "./schema";

const PANEL_W = 420;
const PANEL_H = 360;
const COLORS = ["#2278b5", "#d95f02", "#1b9e77", "#7570b3"];

export interface RenderOptions {
  overlayTheory: boolean;
  scenario?: Scenario;
  theoryPoints?: number;
}

function theoryGrid(xs: number[], n: number): number[] {
  const lo = Math.min(...xs);
  const hi = Math.max(...xs);
  const out: number[] = [];
  for (let i = 0; i < n; i++) out.push(lo + ((hi - lo) * i) / (n - 1));
  return out;
}

export function buildOption(panels: PanelData[], opts: RenderOptions) {
  const grids: object[] = [];
  const xAxes: object[] = [];
  const yAxes: object[] = [];
  const series: object[] = [];
  const titles: object[] = [];

  panels.forEach((panel, pi) => {
    const left = 60 + pi * PANEL_W;
    grids.push({ left, top: 70, width: PANEL_W - 110, height: PANEL_H - 140 });
    const scale = panel.spec.xScale ?? ((x: number) => x);
    xAxes.push({ gridIndex: pi, type: "value", name: panel.spec.xLabel,
                 nameLocation: "middle", nameGap: 28 });
    yAxes.push({ gridIndex: pi, type: "value", name: panel.spec.yLabel,
                 scale: true });
    titles.push({ text: panel.spec.title, left: left + (PANEL_W - 110) / 2,
                  top: 16, textAlign: "center",
                  textStyle: { fontSize: 13 } });

    panel.spec.series.forEach((ss, si) => {
      const color = COLORS[si % COLORS.length];
      const pts = panel.rows.map((r) => [scale(r.sweep_value),
                                         Number(r[ss.field])]);
      series.push({
        type: "scatter", name: ss.name, xAxisIndex: pi, yAxisIndex: pi,
        data: pts, symbolSize: 7, itemStyle: { color },
      });
      if (ss.stderrField) {
        // 3-sigma bars drawn as a custom series
        const errField = ss.stderrField;
        const bars = panel.rows.map((r) => [scale(r.sweep_value),
                                            Number(r[ss.field]),
                                            3 * Number(r[errField])]);
        series.push({
          type: "custom", name: `${ss.name} 3sigma`, xAxisIndex: pi,
          yAxisIndex: pi, silent: true, data: bars, z: 1,
          renderItem: (params: any, api: any) => {
            const x = api.value(0);
            const y = api.value(1);
            const e = api.value(2);
            const lo = api.coord([x, y - e]);
            const hi = api.coord([x, y + e]);
            const style = { stroke: color, lineWidth: 1 };
            return {
              type: "group",
              children: [
                { type: "line", shape: { x1: lo[0], y1: lo[1], x2: hi[0], y2: hi[1] }, style },
                { type: "line", shape: { x1: lo[0] - 4, y1: lo[1], x2: lo[0] + 4, y2: lo[1] }, style },
                { type: "line", shape: { x1: hi[0] - 4, y1: hi[1], x2: hi[0] + 4, y2: hi[1] }, style },
              ],
            };
          },
        });
      }
      if (opts.overlayTheory && ss.theory && opts.scenario) {
        const xsRaw = panel.rows.map((r) => r.sweep_value);
        const grid = theoryGrid(xsRaw, opts.theoryPoints ?? 101);
        const curve = grid.map((x) => [scale(x),
                                       ss.theory!(opts.scenario!, x)]);
        series.push({
          type: "line", name: `${ss.name} (theory)`, xAxisIndex: pi,
          yAxisIndex: pi, data: curve, showSymbol: false, smooth: false,
          lineStyle: { color, width: 1.5, type: "solid" },
        });
      }
    });
  });

  return {
    animation: false,
    backgroundColor: "#ffffff",
    grid: grids,
    xAxis: xAxes,
    yAxis: yAxes,
    title: titles,
    series,
  };
}

export function renderSvg(panels: PanelData[], opts: RenderOptions): string {
  const width = 60 + panels.length * PANEL_W;
  const chart = echarts.init(null as any, null, {
    renderer: "svg", ssr: true, width, height: PANEL_H,
  });
  chart.setOption(buildOption(panels, opts) as echarts.EChartsCoreOption);
  const svg = chart.renderToSVGString();
  chart.dispose();
  return svg;
}

export function writeImage(svg: string, outPath: string): void {
  const ext = path.extname(outPath).toLowerCase();
  if (ext === ".png") {
    // lazy import: rasterizer is only needed for png output
    const { Resvg } = require("@resvg/resvg-js");
    const png = new Resvg(svg, { background: "white" }).render().asPng();
    fs.writeFileSync(outPath, png);
    return;
  }
  if (ext === ".svg" || ext === "") {
    fs.writeFileSync(outPath.endsWith(".svg") ? outPath : `${outPath}.svg`, svg);
    return;
  }
  throw new Error(`unsupported image format ${ext}; use .svg or .png`);
}
