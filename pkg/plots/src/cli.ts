#!/usr/bin/env node
/**
 * plots --spec <path>
 *
 * Exit codes: 0 when the image was written and is non-empty, 2 on
 * spec/input errors (message names the offending file), 3 on anything
 * unexpected.
 */

import { statSync } from "node:fs";
import { pathToFileURL } from "node:url";

import { InputError, renderSpec, SpecError } from "./render.js";

const USAGE = "usage: plots --spec <path>";

function specArg(argv: string[]): string | null {
  for (let i = 0; i < argv.length; i++) {
    if (argv[i] === "--spec") {
      return i + 1 < argv.length ? argv[i + 1] : null;
    }
    if (argv[i].startsWith("--spec=")) {
      return argv[i].slice("--spec=".length);
    }
  }
  return null;
}

export function main(argv: string[], err: (line: string) => void = (line) =>
  process.stderr.write(line + "\n")): number {
  const specPath = specArg(argv);
  if (specPath === null || specPath === "") {
    err(USAGE);
    return 2;
  }
  let out: string;
  try {
    out = renderSpec(specPath);
  } catch (e) {
    if (e instanceof SpecError || e instanceof InputError) {
      err(String((e as Error).message));
      return 2;
    }
    err(`internal error: ${(e as Error).stack ?? e}`);
    return 3;
  }
  // success is defined by the artifact, not the code path
  let size = 0;
  try {
    size = statSync(out).size;
  } catch {
    size = 0;
  }
  if (size <= 0) {
    err(`${out}: output image missing or empty`);
    return 3;
  }
  process.stdout.write(`wrote ${out} (${size} bytes)\n`);
  return 0;
}

if (process.argv[1] && import.meta.url === pathToFileURL(process.argv[1]).href) {
  process.exit(main(process.argv.slice(2)));
}
