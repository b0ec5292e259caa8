import { mkdtempSync, writeFileSync } from "fs";
import { tmpdir } from "os";
import { join } from "path";
import { describe, expect, it } from "vitest";

import { parseFidelityCsv, parseSummaryCsv } from "../src/csv";

function tempFile(content: string): string {
  const dir = mkdtempSync(join(tmpdir(), "plots-"));
  const path = join(dir, "input.csv");
  writeFileSync(path, content);
  return path;
}

describe("parseFidelityCsv", () => {
  it("reads the harness schema", () => {
    const path = tempFile(
      "sample,mean_fid,std_fid\n1,0.5,0.1\n2,0.75,0.05\n",
    );
    const curve = parseFidelityCsv(path, "rbm");
    expect(curve.label).toBe("rbm");
    expect(curve.samples).toEqual([1, 2]);
    expect(curve.mean).toEqual([0.5, 0.75]);
    expect(curve.std).toEqual([0.1, 0.05]);
  });

  it("names the offending column on a header mismatch", () => {
    const path = tempFile("sample,fid,std_fid\n1,0.5,0.1\n");
    expect(() => parseFidelityCsv(path, "x")).toThrow(/column 2.*"mean_fid".*"fid"/);
  });

  it("names the column and row for a bad number", () => {
    const path = tempFile("sample,mean_fid,std_fid\n1,0.5,0.1\n2,oops,0.1\n");
    expect(() => parseFidelityCsv(path, "x")).toThrow(/row 3.*"mean_fid".*oops/);
  });

  it("rejects empty files", () => {
    expect(() => parseFidelityCsv(tempFile(""), "x")).toThrow(/empty/);
    expect(() =>
      parseFidelityCsv(tempFile("sample,mean_fid,std_fid\n"), "x"),
    ).toThrow(/no data rows/);
  });
});

describe("parseSummaryCsv", () => {
  it("collects averages and the baseline", () => {
    const path = tempFile(
      "algorithm,window,average_fidelity\n" +
        "rbm,500,0.9\nrbm,10,0.95\ndbm-sa,500,0.93\nrandom-baseline,,0.36\n",
    );
    const table = parseSummaryCsv(path);
    expect(table.averages.get("rbm")?.get(500)).toBe(0.9);
    expect(table.averages.get("rbm")?.get(10)).toBe(0.95);
    expect(table.averages.get("dbm-sa")?.get(500)).toBe(0.93);
    expect(table.baseline).toBe(0.36);
  });

  it("rejects an unexpected header", () => {
    const path = tempFile("algo,window,average_fidelity\nrbm,500,0.9\n");
    expect(() => parseSummaryCsv(path)).toThrow(/column 1.*"algorithm"/);
  });
});
