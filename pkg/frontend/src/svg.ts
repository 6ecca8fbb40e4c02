/** Minimal deterministic SVG line charts with confidence error bars. */

export interface Point {
  x: number;
  y: number;
  halfwidth: number;
}

export interface Series {
  name: string;
  points: Point[];
}

export interface ChartOptions {
  title: string;
  xLabel: string;
  yLabel: string;
  logY?: boolean;
}

const WIDTH = 760;
const HEIGHT = 500;
const MARGIN = { left: 64, right: 16, top: 28, bottom: 112 };
const PLOT_W = WIDTH - MARGIN.left - MARGIN.right;
const PLOT_H = HEIGHT - MARGIN.top - MARGIN.bottom;

const COLORS = [
  "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
  "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
];
const MARKERS = ["circle", "square", "diamond", "triangle"] as const;

function fmt(v: number): string {
  if (!Number.isFinite(v)) throw new Error(`non-finite coordinate ${v}`);
  return Number(v.toPrecision(8)).toString();
}

function niceTicks(lo: number, hi: number, n = 6): number[] {
  if (hi <= lo) return [lo];
  const span = hi - lo;
  const step0 = span / Math.max(1, n - 1);
  const mag = Math.pow(10, Math.floor(Math.log10(step0)));
  const step = [1, 2, 2.5, 5, 10].map((m) => m * mag)
    .find((s) => span / s <= n - 1) ?? 10 * mag;
  const start = Math.ceil(lo / step) * step;
  const ticks: number[] = [];
  for (let v = start; v <= hi + 1e-12 * span; v += step) {
    ticks.push(Number(v.toPrecision(10)));
  }
  return ticks;
}

function decadeTicks(lo: number, hi: number): number[] {
  const ticks: number[] = [];
  for (let e = Math.floor(Math.log10(lo)); e <= Math.ceil(Math.log10(hi)); e++) {
    const v = Math.pow(10, e);
    if (v >= lo / 1.0001 && v <= hi * 1.0001) ticks.push(v);
  }
  return ticks.length >= 2 ? ticks : [lo, hi];
}

function marker(kind: (typeof MARKERS)[number], x: number, y: number,
                color: string): string {
  const r = 3.4;
  switch (kind) {
    case "circle":
      return `<circle cx="${fmt(x)}" cy="${fmt(y)}" r="${r}" fill="${color}"/>`;
    case "square":
      return `<rect x="${fmt(x - r)}" y="${fmt(y - r)}" width="${2 * r}" ` +
        `height="${2 * r}" fill="${color}"/>`;
    case "diamond":
      return `<path d="M ${fmt(x)} ${fmt(y - r - 1)} L ${fmt(x + r + 1)} ${fmt(y)} ` +
        `L ${fmt(x)} ${fmt(y + r + 1)} L ${fmt(x - r - 1)} ${fmt(y)} Z" fill="${color}"/>`;
    default:
      return `<path d="M ${fmt(x)} ${fmt(y - r - 1)} L ${fmt(x + r + 1)} ${fmt(y + r)} ` +
        `L ${fmt(x - r - 1)} ${fmt(y + r)} Z" fill="${color}"/>`;
  }
}

/** Render a chart to an SVG string; output depends only on the inputs. */
export function lineChart(series: Series[], opts: ChartOptions): string {
  if (series.length === 0) throw new Error("nothing to plot: no series");
  const pts = series.flatMap((s) => s.points);
  if (pts.length === 0) throw new Error("nothing to plot: no points");

  const xs = pts.map((p) => p.x);
  const xLo = Math.min(...xs);
  const xHi = Math.max(...xs);
  const yTop = Math.max(...pts.map((p) => p.y + p.halfwidth));
  const yBotData = Math.min(...pts.map((p) => p.y - p.halfwidth));

  let yLo: number, yHi: number, yTicks: number[];
  let yScale: (v: number) => number;
  if (opts.logY) {
    const floor = Math.min(...pts.map((p) => Math.max(p.y - p.halfwidth, p.y / 10)));
    yLo = Math.max(floor, 1e-12);
    yHi = yTop * 1.05;
    const [llo, lhi] = [Math.log10(yLo), Math.log10(yHi)];
    yScale = (v) => MARGIN.top + PLOT_H * (1 - (Math.log10(Math.max(v, yLo)) - llo) / (lhi - llo));
    yTicks = decadeTicks(yLo, yHi);
  } else {
    yLo = Math.min(0, yBotData);
    yHi = yTop + 0.05 * (yTop - yLo || 1);
    yScale = (v) => MARGIN.top + PLOT_H * (1 - (v - yLo) / (yHi - yLo));
    yTicks = niceTicks(yLo, yHi);
  }
  const xPad = xHi > xLo ? 0.03 * (xHi - xLo) : Math.max(0.5, Math.abs(xLo) * 0.1);
  const x0 = xLo - xPad;
  const x1 = xHi + xPad;
  const xScale = (v: number) => MARGIN.left + (PLOT_W * (v - x0)) / (x1 - x0);

  const out: string[] = [];
  out.push(`<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" ` +
    `height="${HEIGHT}" viewBox="0 0 ${WIDTH} ${HEIGHT}" font-family="sans-serif">`);
  out.push(`<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`);
  out.push(`<text x="${WIDTH / 2}" y="18" text-anchor="middle" font-size="15">` +
    `${opts.title}</text>`);

  // axes
  const axisY = MARGIN.top + PLOT_H;
  out.push(`<g class="axes" stroke="black" fill="none">` +
    `<line x1="${MARGIN.left}" y1="${MARGIN.top}" x2="${MARGIN.left}" y2="${axisY}"/>` +
    `<line x1="${MARGIN.left}" y1="${axisY}" x2="${MARGIN.left + PLOT_W}" y2="${axisY}"/></g>`);
  for (const t of niceTicks(x0, x1)) {
    const px = xScale(t);
    out.push(`<g class="xtick"><line x1="${fmt(px)}" y1="${axisY}" x2="${fmt(px)}" ` +
      `y2="${axisY + 5}" stroke="black"/>` +
      `<text x="${fmt(px)}" y="${axisY + 20}" text-anchor="middle" font-size="11">` +
      `${Number(t.toPrecision(6))}</text></g>`);
  }
  for (const t of yTicks) {
    const py = yScale(t);
    out.push(`<g class="ytick"><line x1="${MARGIN.left - 5}" y1="${fmt(py)}" ` +
      `x2="${MARGIN.left}" y2="${fmt(py)}" stroke="black"/>` +
      `<line x1="${MARGIN.left}" y1="${fmt(py)}" x2="${MARGIN.left + PLOT_W}" ` +
      `y2="${fmt(py)}" stroke="#dddddd"/>` +
      `<text x="${MARGIN.left - 9}" y="${fmt(py + 4)}" text-anchor="end" ` +
      `font-size="11">${Number(t.toPrecision(6))}</text></g>`);
  }
  out.push(`<text x="${MARGIN.left + PLOT_W / 2}" y="${axisY + 40}" ` +
    `text-anchor="middle" font-size="13">${opts.xLabel}</text>`);
  out.push(`<text x="18" y="${MARGIN.top + PLOT_H / 2}" text-anchor="middle" ` +
    `font-size="13" transform="rotate(-90 18 ${MARGIN.top + PLOT_H / 2})">` +
    `${opts.yLabel}</text>`);

  // series
  series.forEach((s, i) => {
    const color = COLORS[i % COLORS.length];
    const mk = MARKERS[i % MARKERS.length];
    const coords = s.points.map((p) => [xScale(p.x), yScale(p.y)] as const);
    const path = coords.map(([x, y]) => `${fmt(x)},${fmt(y)}`).join(" ");
    out.push(`<g class="series" data-name="${s.name}">`);
    out.push(`<polyline points="${path}" fill="none" stroke="${color}" stroke-width="1.6"/>`);
    s.points.forEach((p, k) => {
      const [px, py] = coords[k];
      const lo = yScale(Math.max(p.y - p.halfwidth, opts.logY ? yLo : -Infinity));
      const hi = yScale(p.y + p.halfwidth);
      out.push(`<g class="errorbar">` +
        `<line x1="${fmt(px)}" y1="${fmt(lo)}" x2="${fmt(px)}" y2="${fmt(hi)}" stroke="${color}"/>` +
        `<line x1="${fmt(px - 3)}" y1="${fmt(lo)}" x2="${fmt(px + 3)}" y2="${fmt(lo)}" stroke="${color}"/>` +
        `<line x1="${fmt(px - 3)}" y1="${fmt(hi)}" x2="${fmt(px + 3)}" y2="${fmt(hi)}" stroke="${color}"/></g>`);
      out.push(marker(mk, px, py, color));
    });
    out.push(`</g>`);
  });

  // legend, in the given series order
  const perRow = 4;
  series.forEach((s, i) => {
    const col = i % perRow;
    const row = Math.floor(i / perRow);
    const lx = MARGIN.left + col * (PLOT_W / perRow);
    const ly = axisY + 56 + row * 20;
    const color = COLORS[i % COLORS.length];
    out.push(`<g class="legend" data-name="${s.name}">` +
      `<line x1="${lx}" y1="${ly}" x2="${lx + 22}" y2="${ly}" stroke="${color}" stroke-width="2"/>` +
      marker(MARKERS[i % MARKERS.length], lx + 11, ly, color) +
      `<text x="${lx + 28}" y="${ly + 4}" font-size="12">${s.name}</text></g>`);
  });

  out.push(`</svg>`);
  return out.join("\n");
}
