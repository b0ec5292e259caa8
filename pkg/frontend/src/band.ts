/** Mean +- one standard deviation, clipped to the fidelity range [0, 1]. */

export interface Band {
  lower: number[];
  upper: number[];
}

const clip = (x: number) => Math.min(1, Math.max(0, x));

export function stdBand(mean: number[], std: number[]): Band {
  if (mean.length !== std.length) {
    throw new Error(`band inputs disagree: ${mean.length} vs ${std.length}`);
  }
  return {
    lower: mean.map((m, i) => clip(m - std[i])),
    upper: mean.map((m, i) => clip(m + std[i])),
  };
}
