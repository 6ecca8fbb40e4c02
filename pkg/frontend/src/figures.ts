/** Figure panel specs: which series, which axis, which metric per id.
 *
 * Mirrors the simulator's preset table so `render --figure 3a` consumes the
 * CSV written by `aoisim reproduce --figure 3a`.
 */

export type XAxis = "rho" | "scv";
export type Metric = "aoi" | "paoi" | "gain";

export interface FigureSpec {
  figure: string;
  xAxis: XAxis;
  metric: Metric;
  policies: string[];
}

const COMMON8 = ["fcfs", "random", "lcfs", "sjf", "ps", "lcfs_p", "srpt", "sjf_p"];
const AOI_BASED = ["lcfs", "sjf", "ade", "ads", "adm"];
const GAIN_BASES = ["random", "lcfs", "sjf", "sjf_p", "srpt"];

function panels(prefix: string, letters: string, policies: string[],
                metric: Metric): FigureSpec[] {
  return [...letters].map((letter) => ({
    figure: `${prefix}${letter}`,
    // the (c) panel of every family sweeps the service-size variability
    xAxis: letter === "c" ? "scv" : "rho",
    metric,
    policies,
  }));
}

export const FIGURES: Map<string, FigureSpec> = new Map(
  [
    ...panels("3", "abc", COMMON8, "aoi"),
    ...panels("4", "abc", COMMON8, "paoi"),
    ...panels("9", "abc", GAIN_BASES, "gain"),
    ...panels("10", "abc", GAIN_BASES, "gain"),
    ...panels("11", "abc", AOI_BASED, "aoi"),
    ...panels("12", "abc", AOI_BASED, "paoi"),
    ...panels("a10", "abcdef", COMMON8, "aoi"),
    ...panels("a11", "abcdef", COMMON8, "paoi"),
    ...panels("a12", "abcdef", AOI_BASED, "aoi"),
    ...panels("a13", "abcdef", AOI_BASED, "paoi"),
    ...panels("a14", "abcdef", GAIN_BASES, "gain"),
    ...panels("a15", "abcdef", GAIN_BASES, "gain"),
  ].map((spec) => [spec.figure, spec]),
);

export function figureSpec(id: string): FigureSpec {
  const spec = FIGURES.get(id);
  if (!spec) {
    const ids = [...FIGURES.keys()].sort().join(", ");
    throw new Error(`unknown figure id '${id}'; valid ids: ${ids}`);
  }
  return spec;
}
