/**
 * Reader for benchmark trace CSVs.
 *
 * The producer writes a plain comma-separated file with the header
 * `iter,grad_evals,fval,stationarity,kappa,winner,elapsed_s`, no quoting,
 * and an optional trailing `# abort: ...` marker row on aborted runs.
 * Lines starting with `#` are therefore skipped as comments.
 *
 * Every error thrown here is an InputError whose message starts with the
 * offending file path.
 */

import { readFileSync } from "node:fs";

export class InputError extends Error {}

export interface Table {
  header: string[];
  rows: string[][];
}

export function parseCsv(text: string, path: string): Table {
  const lines = text
    .split(/\r?\n/)
    .filter((line) => line.trim() !== "" && !line.trimStart().startsWith("#"));
  if (lines.length === 0) {
    throw new InputError(`${path}: empty CSV`);
  }
  const header = lines[0].split(",").map((h) => h.trim());
  const rows: string[][] = [];
  for (let i = 1; i < lines.length; i++) {
    const cells = lines[i].split(",");
    if (cells.length !== header.length) {
      throw new InputError(
        `${path}: row ${i} has ${cells.length} cells, header has ${header.length}`,
      );
    }
    rows.push(cells);
  }
  return { header, rows };
}

export function readCsv(path: string): Table {
  let text: string;
  try {
    text = readFileSync(path, "utf-8");
  } catch (err) {
    throw new InputError(`${path}: ${(err as Error).message}`);
  }
  return parseCsv(text, path);
}

/** Extract a column as finite numbers; missing column names the file. */
export function numericColumn(table: Table, name: string, path: string): number[] {
  const idx = table.header.indexOf(name);
  if (idx < 0) {
    throw new InputError(
      `${path}: missing column '${name}' (header: ${table.header.join(",")})`,
    );
  }
  const out: number[] = [];
  for (let i = 0; i < table.rows.length; i++) {
    const raw = table.rows[i][idx].trim();
    const v = Number(raw);
    if (raw === "" || !Number.isFinite(v)) {
      throw new InputError(
        `${path}: row ${i + 1}, column '${name}': cannot parse '${raw}' as a finite number`,
      );
    }
    out.push(v);
  }
  return out;
}
