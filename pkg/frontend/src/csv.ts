/**
 * Strict readers for the solver's emitted CSV contracts.
 *
 * Trace files:       k,f_y,gap,oracle_calls,elapsed_ms
 * Bound-curve files: N,bound_n2,bound_n1sq
 *
 * Any header deviation or malformed row is a hard error; silently plotting
 * the wrong column would be worse than failing.
 */

export const TRACE_HEADER = "k,f_y,gap,oracle_calls,elapsed_ms";
export const BOUND_HEADER = "N,bound_n2,bound_n1sq";

export class CsvFormatError extends Error {
  constructor(message: string, readonly path: string) {
    super(`${path}: ${message}`);
    this.name = "CsvFormatError";
  }
}

export interface TracePoint {
  k: number;
  fY: number;
  gap: number;
  oracleCalls: number;
  elapsedMs: number;
}

export interface BoundPoint {
  n: number;
  boundN2: number;
  boundN1Sq: number;
}

function splitLines(text: string, path: string): string[] {
  const lines = text.split("\n").filter((line, i, all) => line !== "" || i !== all.length - 1);
  if (lines.length === 0) {
    throw new CsvFormatError("file is empty", path);
  }
  return lines;
}

function parseNumber(field: string, what: string, line: number, path: string): number {
  // the writer uses plain decimal/scientific notation plus nan for unknown gaps
  const value = field === "nan" ? NaN : Number(field);
  if (field === "" || (Number.isNaN(value) && field !== "nan")) {
    throw new CsvFormatError(`line ${line}: bad ${what} value ${JSON.stringify(field)}`, path);
  }
  return value;
}

export function parseTrace(text: string, path: string): TracePoint[] {
  const lines = splitLines(text, path);
  if (lines[0] !== TRACE_HEADER) {
    throw new CsvFormatError(
      `expected header ${JSON.stringify(TRACE_HEADER)}, got ${JSON.stringify(lines[0])}`,
      path,
    );
  }
  if (lines.length < 2) {
    throw new CsvFormatError("trace has a header but no rows", path);
  }
  const points: TracePoint[] = [];
  for (let i = 1; i < lines.length; i++) {
    const row = lines[i]!;
    const fields = row.split(",");
    if (fields.length !== 5) {
      throw new CsvFormatError(`line ${i + 1}: expected 5 fields, got ${fields.length}`, path);
    }
    points.push({
      k: parseNumber(fields[0]!, "k", i + 1, path),
      fY: parseNumber(fields[1]!, "f_y", i + 1, path),
      gap: parseNumber(fields[2]!, "gap", i + 1, path),
      oracleCalls: parseNumber(fields[3]!, "oracle_calls", i + 1, path),
      elapsedMs: parseNumber(fields[4]!, "elapsed_ms", i + 1, path),
    });
  }
  return points;
}

export function parseBound(text: string, path: string): BoundPoint[] {
  const lines = splitLines(text, path);
  if (lines[0] !== BOUND_HEADER) {
    throw new CsvFormatError(
      `expected header ${JSON.stringify(BOUND_HEADER)}, got ${JSON.stringify(lines[0])}`,
      path,
    );
  }
  const points: BoundPoint[] = [];
  for (let i = 1; i < lines.length; i++) {
    const fields = lines[i]!.split(",");
    if (fields.length !== 3) {
      throw new CsvFormatError(`line ${i + 1}: expected 3 fields, got ${fields.length}`, path);
    }
    points.push({
      n: parseNumber(fields[0]!, "N", i + 1, path),
      boundN2: parseNumber(fields[1]!, "bound_n2", i + 1, path),
      boundN1Sq: parseNumber(fields[2]!, "bound_n1sq", i + 1, path),
    });
  }
  return points;
}
