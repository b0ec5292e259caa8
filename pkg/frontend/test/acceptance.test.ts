/**
 * A11: the plot commands regenerate the reference-style figures from the
 * replicated-training artifacts without error, with bands clipped to [0, 1].
 */

import { existsSync, mkdtempSync, readFileSync } from "fs";
import { tmpdir } from "os";
import { join, resolve } from "path";
import { describe, expect, it } from "vitest";

import { stdBand } from "../src/band";
import { parseFidelityCsv } from "../src/csv";
import { main } from "../src/cli";

const DATA = resolve(__dirname, "..", "..", "tests", "data", "acceptance");

function requireArtifact(path: string): string {
  if (!existsSync(path)) {
    throw new Error(
      `missing acceptance artifact ${path}; run scripts/run_acceptance.py first`,
    );
  }
  return path;
}

describe("A11: figures regenerate from the study artifacts", () => {
  it("renders the three-algorithm fidelity figure from the a7 CSVs", () => {
    const out = join(mkdtempSync(join(tmpdir(), "figs-")), "fidelity.svg");
    const code = main([
      "fidelity",
      "--csv", `rbm=${requireArtifact(join(DATA, "a7", "rbm.csv"))}`,
      "--csv", `dbm-sqa=${requireArtifact(join(DATA, "a7", "dbm-sqa.csv"))}`,
      "--csv", `qbm=${requireArtifact(join(DATA, "a7", "qbm.csv"))}`,
      "--baseline", "0.36309523809523814",
      "--title", "3x5 maze, sweep sampling",
      "--out", out,
    ]);
    expect(code).toBe(0);
    const svg = readFileSync(out, "utf-8");
    expect(svg).toContain("<svg");
    expect(svg.length).toBeGreaterThan(5000);
    console.log(`A11 PASS - fidelity figure written (${svg.length} bytes)`);
  });

  it("renders the scaling figure from the a9 summaries", () => {
    const out = join(mkdtempSync(join(tmpdir(), "figs-")), "scaling.svg");
    const code = main([
      "scaling",
      "--summary", `3=${requireArtifact(join(DATA, "a9-n3", "av_summary.csv"))}`,
      "--summary", `5=${requireArtifact(join(DATA, "a9-n5", "av_summary.csv"))}`,
      "--summary", `7=${requireArtifact(join(DATA, "a9-n7", "av_summary.csv"))}`,
      "--title", "average fidelity vs maze size",
      "--out", out,
    ]);
    expect(code).toBe(0);
    expect(readFileSync(out, "utf-8")).toContain("<svg");
    console.log("A11 PASS - scaling figure written");
  });

  it("bands computed from the artifacts stay inside [0, 1]", () => {
    for (const name of ["rbm", "dbm-sqa", "qbm"]) {
      const curve = parseFidelityCsv(
        requireArtifact(join(DATA, "a7", `${name}.csv`)), name,
      );
      const band = stdBand(curve.mean, curve.std);
      expect(Math.min(...band.lower)).toBeGreaterThanOrEqual(0);
      expect(Math.max(...band.upper)).toBeLessThanOrEqual(1);
    }
  });

  it("fails cleanly on a schema violation instead of plotting", () => {
    const out = join(mkdtempSync(join(tmpdir(), "figs-")), "x.svg");
    const bad = join(
      mkdtempSync(join(tmpdir(), "figs-")), "bad.csv",
    );
    require("fs").writeFileSync(bad, "sample,wrong,std_fid\n1,0.5,0.1\n");
    const code = main(["fidelity", "--csv", `x=${bad}`, "--out", out]);
    expect(code).toBe(1);
    expect(existsSync(out)).toBe(false);
  });
});
