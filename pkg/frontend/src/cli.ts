/**
 * Plotting CLI for harness result files.
 *
 *   fidelity --csv label=path [--csv ...] [--baseline X] [--title T] --out fig.svg
 *   scaling  --summary n=path [--summary ...] [--title T] --out fig.svg
 *
 * Exits nonzero on any parse failure; input files are never modified.
 */

import { writeFileSync } from "fs";

import { parseFidelityCsv, parseSummaryCsv, SummaryTable } from "./csv";
import { renderFidelitySvg, renderScalingSvg } from "./render";

interface Args {
  positional: string[];
  single: Map<string, string>;
  repeated: Map<string, string[]>;
}

function parseArgs(argv: string[], repeatable: Set<string>): Args {
  const args: Args = { positional: [], single: new Map(), repeated: new Map() };
  for (let i = 0; i < argv.length; i++) {
    const token = argv[i];
    if (!token.startsWith("--")) {
      args.positional.push(token);
      continue;
    }
    const name = token.slice(2);
    const value = argv[++i];
    if (value === undefined) throw new Error(`missing value for --${name}`);
    if (repeatable.has(name)) {
      if (!args.repeated.has(name)) args.repeated.set(name, []);
      args.repeated.get(name)!.push(value);
    } else {
      args.single.set(name, value);
    }
  }
  return args;
}

function splitTagged(raw: string, flag: string): [string, string] {
  const at = raw.indexOf("=");
  if (at <= 0) throw new Error(`--${flag} expects tag=path, got "${raw}"`);
  return [raw.slice(0, at), raw.slice(at + 1)];
}

function requireOut(args: Args): string {
  const out = args.single.get("out");
  if (!out) throw new Error("--out is required");
  return out;
}

function runFidelity(argv: string[]): void {
  const args = parseArgs(argv, new Set(["csv"]));
  const entries = args.repeated.get("csv") ?? [];
  if (entries.length === 0) throw new Error("need at least one --csv label=path");
  const curves = entries.map((raw) => {
    const [label, path] = splitTagged(raw, "csv");
    return parseFidelityCsv(path, label);
  });
  const baselineRaw = args.single.get("baseline");
  let baseline: number | null = null;
  if (baselineRaw !== undefined) {
    baseline = Number(baselineRaw);
    if (!Number.isFinite(baseline)) {
      throw new Error(`--baseline must be a number, got "${baselineRaw}"`);
    }
  }
  const svg = renderFidelitySvg({
    curves,
    baseline,
    title: args.single.get("title"),
  });
  writeFileSync(requireOut(args), svg);
}

function runScaling(argv: string[]): void {
  const args = parseArgs(argv, new Set(["summary"]));
  const entries = args.repeated.get("summary") ?? [];
  if (entries.length === 0) throw new Error("need at least one --summary n=path");
  const tables = new Map<number, SummaryTable>();
  for (const raw of entries) {
    const [tag, path] = splitTagged(raw, "summary");
    const n = Number(tag);
    if (!Number.isInteger(n)) throw new Error(`--summary tag must be a size, got "${tag}"`);
    tables.set(n, parseSummaryCsv(path));
  }
  const svg = renderScalingSvg({ tables, title: args.single.get("title") });
  writeFileSync(requireOut(args), svg);
}

export function main(argv: string[]): number {
  const [command, ...rest] = argv;
  try {
    if (command === "fidelity") runFidelity(rest);
    else if (command === "scaling") runScaling(rest);
    else {
      throw new Error(`usage: fidelity|scaling ... (got "${command ?? ""}")`);
    }
  } catch (error) {
    console.error(String(error instanceof Error ? error.message : error));
    return 1;
  }
  return 0;
}

if (require.main === module) {
  process.exit(main(process.argv.slice(2)));
}
