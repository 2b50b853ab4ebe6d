#!/usr/bin/env node
/**
 * render --csv <runs.csv> --out <figure.svg> [--families poisson,sk]
 *
 * Reads the benchmark run CSV and writes the six-panel figure.  Exits
 * nonzero, without writing any file, on a schema mismatch or empty input.
 */

import { readFileSync, writeFileSync } from "node:fs";
import { pathToFileURL } from "node:url";
import { parseRuns, SchemaError } from "./csv.js";
import { renderFigure } from "./svg.js";

function usage(): never {
  console.error(
    "usage: render --csv <runs.csv> --out <figure.svg> [--families a,b,c]",
  );
  process.exit(2);
}

export function main(argv: string[]): number {
  if (argv[0] !== "render") usage();
  let csvPath: string | undefined;
  let outPath: string | undefined;
  let families: string[] | undefined;
  for (let i = 1; i < argv.length; i += 2) {
    const value = argv[i + 1];
    if (value === undefined) usage();
    switch (argv[i]) {
      case "--csv":
        csvPath = value;
        break;
      case "--out":
        outPath = value;
        break;
      case "--families":
        families = value.split(",").filter((f) => f);
        break;
      default:
        usage();
    }
  }
  if (!csvPath || !outPath) usage();

  let svg: string;
  try {
    const rows = parseRuns(readFileSync(csvPath, "utf-8"));
    svg = renderFigure(rows, families);
  } catch (err) {
    if (err instanceof SchemaError) {
      console.error(`CSV schema error: ${err.message}`);
      return 1;
    }
    console.error(`render failed: ${(err as Error).message}`);
    return 1;
  }
  writeFileSync(outPath, svg, "utf-8");
  console.error(`wrote ${outPath}`);
  return 0;
}

if (
  process.argv[1] &&
  import.meta.url === pathToFileURL(process.argv[1]).href
) {
  process.exit(main(process.argv.slice(2)));
}
