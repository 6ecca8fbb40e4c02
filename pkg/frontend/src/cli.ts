#!/usr/bin/env node
/** render --csv F --figure ID --out IMG [--log-y]
 *
 * Reads a result CSV written by the simulator and writes one SVG panel.
 * Exit codes: 0 ok, 1 bad arguments or schema/figure errors.
 */

import { readFileSync, writeFileSync } from "node:fs";
import { renderFigure } from "./render.js";

function parseArgs(argv: string[]): Map<string, string | boolean> {
  const args = new Map<string, string | boolean>();
  for (let i = 0; i < argv.length; i++) {
    const a = argv[i];
    if (!a.startsWith("--")) throw new Error(`unexpected argument '${a}'`);
    const key = a.slice(2);
    if (key === "log-y") {
      args.set(key, true);
    } else {
      const v = argv[++i];
      if (v === undefined) throw new Error(`missing value for --${key}`);
      args.set(key, v);
    }
  }
  return args;
}

export function main(argv: string[]): number {
  let args: Map<string, string | boolean>;
  try {
    args = parseArgs(argv);
    for (const req of ["csv", "figure", "out"]) {
      if (!args.has(req)) throw new Error(`--${req} is required`);
    }
  } catch (err) {
    console.error(`usage: render --csv F.csv --figure ID --out IMG.svg [--log-y]`);
    console.error(`error: ${(err as Error).message}`);
    return 1;
  }
  try {
    const text = readFileSync(args.get("csv") as string, "utf8");
    const svg = renderFigure(text, args.get("figure") as string, {
      logY: args.get("log-y") === true,
    });
    writeFileSync(args.get("out") as string, svg);
    console.log(`wrote ${args.get("out")}`);
    return 0;
  } catch (err) {
    console.error(`error: ${(err as Error).message}`);
    return 1;
  }
}

process.exitCode = main(process.argv.slice(2));
