#!/usr/bin/env node
/** plot: render simulator sweep CSVs into paper-style figure images.
 *
 *   plot --figure fig5 --csv metrics.csv --out fig5.svg [--overlay-theory]
 *        [--scenario scenario.resolved]
 *
 * --csv may be repeated (or comma-separated) to combine sweep CSVs into a
 * multi-panel figure.  Theory overlays recompute the analytic curves from
 * the resolved scenario echo; by default the tool looks for a
 * scenario.resolved next to the first CSV.  Exit codes: 0 success,
 * 2 validation error, 3 runtime error.
 */

import * as fs from "fs";
import * as path from "path";

import { loadCsvs, loadScenario, Scenario } from "./csv";
import { FigureId, FIGURES, panelsFor } from "./schema";
import { renderSvg, writeImage } from "./render";

interface Args {
  figure: FigureId;
  csvs: string[];
  out: string;
  overlayTheory: boolean;
  scenario?: string;
}

class UsageError extends Error {}

function parseArgs(argv: string[]): Args {
  const args: Partial<Args> = { csvs: [], overlayTheory: false };
  for (let i = 0; i < argv.length; i++) {
    const a = argv[i];
    const next = () => {
      i += 1;
      if (i >= argv.length) throw new UsageError(`missing value for ${a}`);
      return argv[i];
    };
    switch (a) {
      case "--figure":
        args.figure = next() as FigureId;
        break;
      case "--csv":
        args.csvs!.push(...next().split(","));
        break;
      case "--out":
        args.out = next();
        break;
      case "--overlay-theory":
        args.overlayTheory = true;
        break;
      case "--scenario":
        args.scenario = next();
        break;
      case "--help":
      case "-h":
        throw new UsageError(
          "usage: plot --figure fig2|fig3|fig4|fig5|fig6 --csv metrics.csv " +
          "--out fig.svg [--overlay-theory] [--scenario scenario.resolved]");
      default:
        throw new UsageError(`unknown argument ${a}`);
    }
  }
  if (!args.figure || !(args.figure in FIGURES)) {
    throw new UsageError(
      `--figure must be one of ${Object.keys(FIGURES).join(", ")}`);
  }
  if (!args.csvs || args.csvs.length === 0) {
    throw new UsageError("--csv is required");
  }
  if (!args.out) throw new UsageError("--out is required");
  return args as Args;
}

export function main(argv: string[]): number {
  let args: Args;
  try {
    args = parseArgs(argv);
  } catch (err) {
    console.error(String(err instanceof Error ? err.message : err));
    return 2;
  }
  try {
    const rows = loadCsvs(args.csvs);
    const panels = panelsFor(args.figure, rows);
    let scenario: Scenario | undefined;
    if (args.overlayTheory) {
      const scnPath = args.scenario
        ?? path.join(path.dirname(args.csvs[0]), "scenario.resolved");
      if (!fs.existsSync(scnPath)) {
        console.error(`overlay requested but no resolved scenario at ${scnPath}`);
        return 2;
      }
      scenario = loadScenario(scnPath);
    }
    const svg = renderSvg(panels, {
      overlayTheory: args.overlayTheory, scenario,
    });
    writeImage(svg, args.out);
    console.log(`${args.out}: ${panels.length} panel(s), ` +
                `${panels.reduce((n, p) => n + p.rows.length, 0)} points`);
    return 0;
  } catch (err) {
    const msg = err instanceof Error ? err.message : String(err);
    if (/empty CSV|no panel data|header but no data|unsupported image|missing/.test(msg)) {
      console.error(`validation error: ${msg}`);
      return 2;
    }
    console.error(`runtime error: ${msg}`);
    return 3;
  }
}

if (require.main === module) {
  process.exit(main(process.argv.slice(2)));
}
