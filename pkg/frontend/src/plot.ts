/** Builds the two figure types from summary rows: chunk-size scaling and
 * strong scaling. Rows from other experiments are ignored; series are one
 * per (transport, strategy), labelled "transport/strategy". */

import { ChartSpec, Series, Tick } from "./chart.js";
import { CsvError, SummaryRow } from "./csv.js";

function groupSeries(rows: SummaryRow[], xOf: (r: SummaryRow) => number): Series[] {
  const byKey = new Map<string, SummaryRow[]>();
  for (const r of rows) {
    const key = `${r.transport}/${r.strategy}`;
    const bucket = byKey.get(key) ?? [];
    bucket.push(r);
    byKey.set(key, bucket);
  }
  const labels = [...byKey.keys()].sort();
  return labels.map((label) => ({
    label,
    points: byKey
      .get(label)!
      .map((r) => ({ x: xOf(r), y: r.meanSeconds, ci: r.ci95HalfWidth }))
      .sort((a, b) => a.x - b.x),
  }));
}

/** Power-of-two ticks labelled 2^k, thinned to at most eight. */
function pow2Ticks(values: number[]): Tick[] {
  const exps = [...new Set(values.map((v) => Math.round(Math.log2(v))))].sort((a, b) => a - b);
  const step = Math.max(1, Math.ceil(exps.length / 8));
  const ticks: Tick[] = [];
  for (let i = 0; i < exps.length; i += step) {
    ticks.push({ value: 2 ** exps[i], label: `2^${exps[i]}` });
  }
  return ticks;
}

export function buildChunkChart(rows: SummaryRow[]): ChartSpec {
  const chunkRows = rows.filter((r) => r.experiment === "chunk");
  if (chunkRows.length === 0) {
    throw new CsvError("no chunk-experiment rows in CSV");
  }
  return {
    title: "chunk size scaling",
    xLabel: "chunk size (bytes)",
    yLabel: "mean seconds",
    series: groupSeries(chunkRows, (r) => r.param),
    xTicks: pow2Ticks(chunkRows.map((r) => r.param)),
  };
}

export function buildStrongChart(rows: SummaryRow[]): ChartSpec {
  const strongRows = rows.filter((r) => r.experiment === "strong");
  if (strongRows.length === 0) {
    throw new CsvError("no strong-experiment rows in CSV");
  }
  const worlds = [...new Set(strongRows.map((r) => r.worldSize))].sort((a, b) => a - b);
  return {
    title: "strong scaling",
    xLabel: "nodes (world size)",
    yLabel: "mean seconds",
    series: groupSeries(strongRows, (r) => r.worldSize),
    xTicks: worlds.map((w) => ({ value: w, label: `${w}` })),
  };
}
