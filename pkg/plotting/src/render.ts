#!/usr/bin/env node
/**
 * Turn a sweep CSV into an SVG line plot of mean worst-group rate versus
 * SNR, one curve per strategy.
 *
 *   node dist/render.js --csv <path> --out <path> [--title <text>]
 */

import { readFileSync, writeFileSync } from "node:fs";
import { pathToFileURL } from "node:url";
import { parseArgs } from "node:util";

import { aggregate } from "./aggregate.js";
import { renderSvg } from "./chart.js";
import { CsvSchemaError, parseSweepCsv } from "./csv.js";

export interface PlotSpec {
  inputCsv: string;
  outputImage: string;
  title?: string;
  strategies?: string[];
  yLabel?: string;
}

/** Read, aggregate and render; returns the written SVG string. */
export function render(spec: PlotSpec): string {
  const text = readFileSync(spec.inputCsv, "utf-8");
  const rows = parseSweepCsv(text);
  const agg = aggregate(rows, spec.strategies);
  const svg = renderSvg(agg, { title: spec.title, yLabel: spec.yLabel });
  writeFileSync(spec.outputImage, svg, "utf-8");
  return svg;
}

export function main(argv: string[]): number {
  let values;
  try {
    ({ values } = parseArgs({
      args: argv,
      options: {
        csv: { type: "string" },
        out: { type: "string" },
        title: { type: "string" },
      },
    }));
  } catch (err) {
    console.error(`error: ${(err as Error).message}`);
    return 2;
  }
  if (!values.csv || !values.out) {
    console.error("usage: render --csv <path> --out <path> [--title <text>]");
    return 2;
  }
  try {
    render({ inputCsv: values.csv, outputImage: values.out, title: values.title });
  } catch (err) {
    if (err instanceof CsvSchemaError) {
      console.error(`error: ${err.message}`);
      return 2;
    }
    console.error(`error: ${(err as Error).message}`);
    return 1;
  }
  console.log(`wrote ${values.out}`);
  return 0;
}

if (process.argv[1] && import.meta.url === pathToFileURL(process.argv[1]).href) {
  process.exit(main(process.argv.slice(2)));
}
