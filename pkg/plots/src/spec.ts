/**
 * Plot spec files: the same flat `key = value` format the benchmark
 * configs use (one key per line, `#` comments), with `trace` repeatable.
 *
 *     # two-way comparison
 *     trace = runs/wrapped.csv
 *     label = wrapped svrg
 *     trace = runs/plain.csv
 *     label = plain svrg
 *     y = fval            # or stationarity
 *     x = grad_evals      # or iter
 *     fstar = 0.4821      # optional, plots fval - fstar
 *     out = figs/compare.svg
 *
 * `label` attaches to the `trace` line above it and defaults to the
 * trace file's basename.  Scalar keys must not repeat.
 */

import { basename } from "node:path";

export class SpecError extends Error {}

export const Y_COLUMNS = ["fval", "stationarity"] as const;
export const X_COLUMNS = ["grad_evals", "iter"] as const;

export interface TraceRef {
  path: string;
  label: string;
}

export interface PlotSpec {
  traces: TraceRef[];
  y: (typeof Y_COLUMNS)[number];
  x: (typeof X_COLUMNS)[number];
  fstar?: number;
  out: string;
}

interface Pair {
  lineno: number;
  key: string;
  value: string;
}

function lex(text: string, path: string): Pair[] {
  const pairs: Pair[] = [];
  const lines = text.split(/\r?\n/);
  for (let i = 0; i < lines.length; i++) {
    const body = lines[i].split("#", 1)[0].trim();
    if (body === "") continue;
    const eq = body.indexOf("=");
    if (eq < 0) {
      throw new SpecError(`${path}: line ${i + 1}: expected key = value, got '${body}'`);
    }
    const key = body.slice(0, eq).trim();
    const value = body.slice(eq + 1).trim();
    if (key === "") {
      throw new SpecError(`${path}: line ${i + 1}: empty key`);
    }
    pairs.push({ lineno: i + 1, key, value });
  }
  return pairs;
}

export function parseSpec(text: string, path: string): PlotSpec {
  const traces: { path: string; label?: string }[] = [];
  const scalars = new Map<string, Pair>();

  for (const pair of lex(text, path)) {
    const { lineno, key, value } = pair;
    if (key === "trace") {
      if (value === "") {
        throw new SpecError(`${path}: line ${lineno}: empty trace path`);
      }
      traces.push({ path: value });
    } else if (key === "label") {
      if (traces.length === 0) {
        throw new SpecError(`${path}: line ${lineno}: label before any trace`);
      }
      const last = traces[traces.length - 1];
      if (last.label !== undefined) {
        throw new SpecError(
          `${path}: line ${lineno}: second label for trace '${last.path}'`,
        );
      }
      last.label = value;
    } else if (key === "y" || key === "x" || key === "fstar" || key === "out") {
      const first = scalars.get(key);
      if (first !== undefined) {
        throw new SpecError(
          `${path}: line ${lineno}: duplicate key '${key}' (first on line ${first.lineno})`,
        );
      }
      scalars.set(key, pair);
    } else {
      throw new SpecError(`${path}: line ${lineno}: unknown key '${key}'`);
    }
  }

  if (traces.length === 0) {
    throw new SpecError(`${path}: no trace entries`);
  }
  const out = scalars.get("out");
  if (out === undefined || out.value === "") {
    throw new SpecError(`${path}: missing required key 'out'`);
  }

  const y = (scalars.get("y")?.value ?? "fval") as PlotSpec["y"];
  if (!Y_COLUMNS.includes(y)) {
    throw new SpecError(`${path}: y must be one of ${Y_COLUMNS.join("/")}, got '${y}'`);
  }
  const x = (scalars.get("x")?.value ?? "grad_evals") as PlotSpec["x"];
  if (!X_COLUMNS.includes(x)) {
    throw new SpecError(`${path}: x must be one of ${X_COLUMNS.join("/")}, got '${x}'`);
  }

  let fstar: number | undefined;
  const rawFstar = scalars.get("fstar");
  if (rawFstar !== undefined) {
    fstar = Number(rawFstar.value);
    if (rawFstar.value === "" || !Number.isFinite(fstar)) {
      throw new SpecError(
        `${path}: line ${rawFstar.lineno}: cannot parse fstar '${rawFstar.value}' as a number`,
      );
    }
    if (y !== "fval") {
      throw new SpecError(`${path}: fstar only applies when y = fval`);
    }
  }

  return {
    traces: traces.map((t) => ({ path: t.path, label: t.label ?? basename(t.path) })),
    y,
    x,
    fstar,
    out: out.value,
  };
}
