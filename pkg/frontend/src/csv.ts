/** Reader for the simulator's result CSV (see the repo root README). */

export interface ResultRow {
  policy: string;
  rho: number;
  arrival_family: string;
  arrival_scv: number;
  service_family: string;
  service_scv: number;
  metric: string;
  mean: number;
  ci_halfwidth: number;
  runs: number;
  updates: number;
  seed: number;
}

export const REQUIRED_COLUMNS = [
  "policy", "rho", "arrival_family", "arrival_scv", "service_family",
  "service_scv", "metric", "mean", "ci_halfwidth", "runs", "updates", "seed",
] as const;

const NUMERIC = new Set([
  "rho", "arrival_scv", "service_scv", "mean", "ci_halfwidth",
  "runs", "updates", "seed",
]);

export class SchemaError extends Error {}

/** Parse CSV text; fields never contain commas or quotes in this schema. */
export function parseResults(text: string): ResultRow[] {
  const lines = text.split("\n")
    .map((l) => (l.endsWith("\r") ? l.slice(0, -1) : l))
    .filter((l) => l.length > 0);
  if (lines.length === 0) {
    throw new SchemaError("empty CSV: no header row");
  }
  const header = lines[0].split(",");
  const missing = REQUIRED_COLUMNS.filter((c) => !header.includes(c));
  if (missing.length > 0) {
    throw new SchemaError(`CSV is missing required columns: ${missing.join(", ")}`);
  }
  const idx = new Map(header.map((name, i) => [name, i]));
  const rows: ResultRow[] = [];
  for (let k = 1; k < lines.length; k++) {
    const parts = lines[k].split(",");
    if (parts.length < header.length) {
      throw new SchemaError(`row ${k} has ${parts.length} fields, expected ${header.length}`);
    }
    const row: Record<string, string | number> = {};
    for (const name of REQUIRED_COLUMNS) {
      const raw = parts[idx.get(name)!];
      if (NUMERIC.has(name)) {
        const v = Number(raw);
        if (!Number.isFinite(v)) {
          throw new SchemaError(`row ${k}: column ${name} is not numeric: ${raw}`);
        }
        row[name] = v;
      } else {
        row[name] = raw;
      }
    }
    rows.push(row as unknown as ResultRow);
  }
  return rows;
}
