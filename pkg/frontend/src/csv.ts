/**
 * Readers for the training harness's result files.
 *
 * Fidelity curves: `sample,mean_fid,std_fid` with one row per training
 * sample.  Trailing-window summaries: `algorithm,window,average_fidelity`
 * with an optional `random-baseline` row whose window column is empty.
 */

import { readFileSync } from "fs";

export interface FidelityCurve {
  label: string;
  samples: number[];
  mean: number[];
  std: number[];
}

export interface SummaryTable {
  /** av values keyed by algorithm, then by window size */
  averages: Map<string, Map<number, number>>;
  baseline: number | null;
}

const FIDELITY_HEADER = ["sample", "mean_fid", "std_fid"];
const SUMMARY_HEADER = ["algorithm", "window", "average_fidelity"];

function splitRows(text: string): string[][] {
  return text
    .split("\n")
    .map((line) => line.trim())
    .filter((line) => line.length > 0)
    .map((line) => line.split(","));
}

function checkHeader(row: string[], expected: string[], path: string): void {
  expected.forEach((name, i) => {
    if (row[i] !== name) {
      throw new Error(
        `${path}: expected column ${i + 1} to be "${name}", found "${row[i] ?? ""}"`,
      );
    }
  });
}

function parseNumber(raw: string, column: string, path: string, row: number): number {
  const value = Number(raw);
  if (raw === "" || !Number.isFinite(value)) {
    throw new Error(`${path}: row ${row}: column "${column}" is not a number: "${raw}"`);
  }
  return value;
}

export function parseFidelityCsv(path: string, label: string): FidelityCurve {
  const rows = splitRows(readFileSync(path, "utf-8"));
  if (rows.length === 0) throw new Error(`${path}: empty file`);
  checkHeader(rows[0], FIDELITY_HEADER, path);
  const curve: FidelityCurve = { label, samples: [], mean: [], std: [] };
  rows.slice(1).forEach((row, i) => {
    curve.samples.push(parseNumber(row[0], "sample", path, i + 2));
    curve.mean.push(parseNumber(row[1], "mean_fid", path, i + 2));
    curve.std.push(parseNumber(row[2], "std_fid", path, i + 2));
  });
  if (curve.samples.length === 0) throw new Error(`${path}: no data rows`);
  return curve;
}

export function parseSummaryCsv(path: string): SummaryTable {
  const rows = splitRows(readFileSync(path, "utf-8"));
  if (rows.length === 0) throw new Error(`${path}: empty file`);
  checkHeader(rows[0], SUMMARY_HEADER, path);
  const table: SummaryTable = { averages: new Map(), baseline: null };
  rows.slice(1).forEach((row, i) => {
    const algorithm = row[0];
    if (algorithm === "random-baseline") {
      table.baseline = parseNumber(row[2], "average_fidelity", path, i + 2);
      return;
    }
    const window = parseNumber(row[1], "window", path, i + 2);
    const value = parseNumber(row[2], "average_fidelity", path, i + 2);
    if (!table.averages.has(algorithm)) table.averages.set(algorithm, new Map());
    table.averages.get(algorithm)!.set(window, value);
  });
  return table;
}
