#!/usr/bin/env node
/**
 * plot — render solver trace CSVs (plus an optional bound curve) to an SVG.
 *
 * Usage:
 *   plot --traces a.csv b.csv --labels "p=1" "p=2" [--bound bound.csv]
 *        [--title "..."] --out fig.svg
 *
 * Exit codes: 0 success, 1 unreadable/malformed inputs, 2 bad usage.
 */

import { readFileSync, writeFileSync } from "node:fs";
import { basename } from "node:path";

import { CsvFormatError, parseBound, parseTrace } from "./csv.js";
import { renderFigure, type Series } from "./render.js";

export interface CliOptions {
  traces: string[];
  labels: string[];
  bound?: string;
  title?: string;
  out: string;
}

export class UsageError extends Error {}

const FLAGS_WITH_LIST = new Set(["--traces", "--labels"]);
const FLAGS_WITH_VALUE = new Set(["--bound", "--out", "--title"]);

export function parseArgs(argv: string[]): CliOptions {
  const lists: Record<string, string[]> = { "--traces": [], "--labels": [] };
  const single: Record<string, string> = {};
  let i = 0;
  while (i < argv.length) {
    const flag = argv[i]!;
    if (FLAGS_WITH_LIST.has(flag)) {
      i += 1;
      const sink = lists[flag]!;
      while (i < argv.length && !argv[i]!.startsWith("--")) {
        sink.push(argv[i]!);
        i += 1;
      }
      if (sink.length === 0) throw new UsageError(`${flag} needs at least one value`);
    } else if (FLAGS_WITH_VALUE.has(flag)) {
      const value = argv[i + 1];
      if (value === undefined || value.startsWith("--")) {
        throw new UsageError(`${flag} needs a value`);
      }
      single[flag] = value;
      i += 2;
    } else {
      throw new UsageError(`unknown argument ${JSON.stringify(flag)}`);
    }
  }
  const traces = lists["--traces"]!;
  let labels = lists["--labels"]!;
  if (traces.length === 0) throw new UsageError("--traces is required");
  if (labels.length === 0) labels = traces.map((t) => basename(t).replace(/\.csv$/, ""));
  if (labels.length !== traces.length) {
    throw new UsageError(
      `got ${labels.length} labels for ${traces.length} traces; counts must match`,
    );
  }
  const out = single["--out"];
  if (out === undefined) throw new UsageError("--out is required");
  return { traces, labels, bound: single["--bound"], title: single["--title"], out };
}

export function run(argv: string[]): number {
  let options: CliOptions;
  try {
    options = parseArgs(argv);
  } catch (err) {
    if (err instanceof UsageError) {
      console.error(`usage error: ${err.message}`);
      return 2;
    }
    throw err;
  }
  try {
    const series: Series[] = options.traces.map((path, i) => ({
      label: options.labels[i]!,
      points: parseTrace(readFileSync(path, "utf8"), path),
    }));
    const bound = options.bound
      ? parseBound(readFileSync(options.bound, "utf8"), options.bound)
      : undefined;
    const svg = renderFigure({ series, bound, title: options.title });
    writeFileSync(options.out, svg);
    console.log(`wrote ${options.out}`);
    return 0;
  } catch (err) {
    if (err instanceof CsvFormatError || err instanceof Error) {
      console.error(`error: ${err.message}`);
      return 1;
    }
    throw err;
  }
}

const invokedDirectly =
  process.argv[1] !== undefined && import.meta.url.endsWith(basename(process.argv[1]));
if (invokedDirectly) {
  process.exit(run(process.argv.slice(2)));
}
