/** Turn one figure panel's CSV rows into an SVG document. */

import { ResultRow, parseResults } from "./csv.js";
import { FigureSpec, figureSpec } from "./figures.js";
import { Series, lineChart } from "./svg.js";

const METRIC_LABEL: Record<string, string> = {
  aoi: "average age (time units)",
  paoi: "average peak age (time units)",
  gain: "informative gain (relative age reduction)",
  delay: "average delay (time units)",
};

const AXIS_LABEL: Record<string, string> = {
  rho: "system load",
  scv: "service-size scv",
};

export interface RenderOptions {
  logY?: boolean;
}

function xValue(row: ResultRow, axis: "rho" | "scv"): number {
  return axis === "rho" ? row.rho : row.service_scv;
}

/** Build ordered, validated series for the panel; no series is dropped. */
export function buildSeries(rows: ResultRow[], spec: FigureSpec): Series[] {
  const wanted = rows.filter((r) => r.metric === spec.metric);
  if (wanted.length === 0) {
    const seen = [...new Set(rows.map((r) => r.metric))].sort().join(", ");
    throw new Error(`CSV has no '${spec.metric}' rows (metrics present: ${seen})`);
  }
  return spec.policies.map((policy) => {
    const mine = wanted
      .filter((r) => r.policy === policy)
      .sort((a, b) => xValue(a, spec.xAxis) - xValue(b, spec.xAxis));
    if (mine.length === 0) {
      throw new Error(`policy '${policy}' required by figure ${spec.figure} ` +
        `is missing from the CSV`);
    }
    return {
      name: policy,
      points: mine.map((r) => ({
        x: xValue(r, spec.xAxis),
        y: r.mean,
        halfwidth: r.ci_halfwidth,
      })),
    };
  });
}

export function renderFigure(csvText: string, figureId: string,
                             opts: RenderOptions = {}): string {
  const spec = figureSpec(figureId);
  const rows = parseResults(csvText);
  const series = buildSeries(rows, spec);
  return lineChart(series, {
    title: `figure ${spec.figure}: ${spec.metric} vs ${spec.xAxis}`,
    xLabel: AXIS_LABEL[spec.xAxis],
    yLabel: METRIC_LABEL[spec.metric] ?? spec.metric,
    logY: opts.logY,
  });
}
