/**
 * SVG rendering of fidelity curves and scaling charts via echarts'
 * server-side renderer (no DOM required).
 *
 * Fidelity figures draw one mean line per algorithm with a shaded band of
 * +-1 standard deviation (clipped to [0, 1]); the random-policy baseline is
 * a dotted horizontal line.  Scaling figures plot trailing-window average
 * fidelity against maze rows, one line per (algorithm, window) pair, with
 * the dotted baseline per maze size.
 */

import * as echarts from "echarts";

import { Band, stdBand } from "./band";
import { FidelityCurve, SummaryTable } from "./csv";

const PALETTE = ["#4165ab", "#c23531", "#61a0a8", "#91c7ae", "#d48265", "#749f83"];

export interface FidelityPlotSpec {
  curves: FidelityCurve[];
  baseline?: number | null;
  title?: string;
}

export interface ScalingPlotSpec {
  /** maze rows n -> that maze's summary table */
  tables: Map<number, SummaryTable>;
  title?: string;
}

function newChart(width: number, height: number): echarts.ECharts {
  return echarts.init(null as never, null, {
    renderer: "svg",
    ssr: true,
    width,
    height,
  });
}

function renderOption(option: echarts.EChartsOption, width: number, height: number): string {
  const chart = newChart(width, height);
  try {
    chart.setOption(option);
    return chart.renderToSVGString();
  } finally {
    chart.dispose();
  }
}

function bandSeries(
  curve: FidelityCurve,
  band: Band,
  color: string,
): echarts.SeriesOption[] {
  const stack = `band-${curve.label}`;
  return [
    {
      name: `${curve.label}-band-low`,
      type: "line",
      data: curve.samples.map((s, i) => [s, band.lower[i]]),
      stack,
      symbol: "none",
      lineStyle: { opacity: 0 },
      tooltip: { show: false },
      silent: true,
    },
    {
      name: `${curve.label}-band`,
      type: "line",
      data: curve.samples.map((s, i) => [s, band.upper[i] - band.lower[i]]),
      stack,
      symbol: "none",
      lineStyle: { opacity: 0 },
      areaStyle: { color, opacity: 0.25 },
      silent: true,
    },
  ];
}

export function renderFidelitySvg(
  spec: FidelityPlotSpec,
  width = 860,
  height = 520,
): string {
  if (spec.curves.length === 0) throw new Error("no curves to plot");
  const labels = new Set(spec.curves.map((c) => c.label));
  if (labels.size !== spec.curves.length) {
    throw new Error("curve labels must be unique");
  }
  const series: echarts.SeriesOption[] = [];
  spec.curves.forEach((curve, i) => {
    const color = PALETTE[i % PALETTE.length];
    series.push(...bandSeries(curve, stdBand(curve.mean, curve.std), color));
    series.push({
      name: curve.label,
      type: "line",
      data: curve.samples.map((s, k) => [s, curve.mean[k]]),
      symbol: "none",
      lineStyle: { color, width: 2 },
      itemStyle: { color },
    });
  });
  if (spec.baseline != null) {
    series.push({
      name: "random policy",
      type: "line",
      data: [
        [Math.min(...spec.curves[0].samples), spec.baseline],
        [Math.max(...spec.curves[0].samples), spec.baseline],
      ],
      symbol: "none",
      lineStyle: { color: "#555", width: 1.5, type: "dotted" },
      itemStyle: { color: "#555" },
    });
  }
  return renderOption(
    {
      animation: false,
      title: spec.title ? { text: spec.title, left: "center" } : undefined,
      legend: {
        bottom: 0,
        data: [
          ...spec.curves.map((c) => c.label),
          ...(spec.baseline != null ? ["random policy"] : []),
        ],
      },
      grid: { left: 60, right: 20, top: spec.title ? 48 : 24, bottom: 64 },
      xAxis: { type: "value", name: "training sample", nameLocation: "middle", nameGap: 28 },
      yAxis: {
        type: "value",
        name: "fidelity",
        nameLocation: "middle",
        nameGap: 40,
        min: 0,
        max: 1,
      },
      series,
    },
    width,
    height,
  );
}

export function renderScalingSvg(
  spec: ScalingPlotSpec,
  width = 860,
  height = 520,
): string {
  const sizes = [...spec.tables.keys()].sort((a, b) => a - b);
  if (sizes.length === 0) throw new Error("no summary tables to plot");
  const pairs = new Map<string, [number, number][]>();
  const baseline: [number, number][] = [];
  for (const n of sizes) {
    const table = spec.tables.get(n)!;
    for (const [algorithm, byWindow] of table.averages) {
      for (const [window, value] of byWindow) {
        const key = `${algorithm} av_${window}`;
        if (!pairs.has(key)) pairs.set(key, []);
        pairs.get(key)!.push([n, value]);
      }
    }
    if (table.baseline != null) baseline.push([n, table.baseline]);
  }
  const series: echarts.SeriesOption[] = [...pairs.entries()].map(
    ([name, data], i) => ({
      name,
      type: "line",
      data,
      lineStyle: { color: PALETTE[i % PALETTE.length] },
      itemStyle: { color: PALETTE[i % PALETTE.length] },
    }),
  );
  if (baseline.length) {
    series.push({
      name: "random policy",
      type: "line",
      data: baseline,
      symbol: "none",
      lineStyle: { color: "#555", width: 1.5, type: "dotted" },
      itemStyle: { color: "#555" },
    });
  }
  return renderOption(
    {
      animation: false,
      title: spec.title ? { text: spec.title, left: "center" } : undefined,
      legend: { bottom: 0 },
      grid: { left: 60, right: 20, top: spec.title ? 48 : 24, bottom: 72 },
      xAxis: {
        type: "value",
        name: "maze rows",
        nameLocation: "middle",
        nameGap: 28,
        minInterval: 1,
      },
      yAxis: {
        type: "value",
        name: "average fidelity",
        nameLocation: "middle",
        nameGap: 40,
        min: 0,
        max: 1,
      },
      series,
    },
    width,
    height,
  );
}
