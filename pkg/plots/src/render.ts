/**
 * Spec file in, SVG file out.
 *
 * Validation order: spec parse, CSV reads, column checks, fstar check,
 * then log-axis filtering.  Points with nonpositive y are dropped (a
 * log axis cannot show them); a trace with no positive values left is
 * an error naming the file.
 */

import { mkdirSync, readFileSync, writeFileSync } from "node:fs";
import { dirname } from "node:path";

import { InputError, numericColumn, readCsv } from "./csv.js";
import { parseSpec, type PlotSpec } from "./spec.js";
import { lineChart, type Series } from "./svg.js";

export { InputError } from "./csv.js";
export { SpecError } from "./spec.js";

export function loadSpec(path: string): PlotSpec {
  let text: string;
  try {
    text = readFileSync(path, "utf-8");
  } catch (err) {
    throw new InputError(`${path}: ${(err as Error).message}`);
  }
  return parseSpec(text, path);
}

export function buildSeries(spec: PlotSpec): Series[] {
  const raw = spec.traces.map((t) => {
    const table = readCsv(t.path);
    return {
      label: t.label,
      path: t.path,
      xs: numericColumn(table, spec.x, t.path),
      ys: numericColumn(table, spec.y, t.path),
    };
  });

  if (spec.fstar !== undefined) {
    for (const s of raw) {
      const min = Math.min(...s.ys);
      if (spec.fstar > min) {
        throw new InputError(
          `${s.path}: fstar ${spec.fstar} exceeds the smallest fval ${min}; ` +
            `f - fstar would be negative`,
        );
      }
    }
  }

  const shift = spec.fstar ?? 0;
  const series: Series[] = [];
  for (const s of raw) {
    const xs: number[] = [];
    const ys: number[] = [];
    for (let i = 0; i < s.ys.length; i++) {
      const y = s.ys[i] - shift;
      if (y > 0) {
        xs.push(s.xs[i]);
        ys.push(y);
      }
    }
    if (ys.length === 0) {
      throw new InputError(
        `${s.path}: no positive '${spec.y}' values to plot on a log axis`,
      );
    }
    series.push({ label: s.label, xs, ys });
  }
  return series;
}

/** Render the spec at `specPath`; returns the output image path. */
export function renderSpec(specPath: string): string {
  const spec = loadSpec(specPath);
  const series = buildSeries(spec);
  const yLabel = spec.fstar !== undefined ? `${spec.y} - fstar` : spec.y;
  const svg = lineChart(series, spec.x, yLabel);
  const dir = dirname(spec.out);
  if (dir !== "" && dir !== ".") {
    mkdirSync(dir, { recursive: true });
  }
  writeFileSync(spec.out, svg, "utf-8");
  return spec.out;
}
