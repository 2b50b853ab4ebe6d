/**
 * Reader for the benchmark run CSV.
 *
 * One row per (target family, parameter, sampler, replicate) run.  Failed
 * runs carry empty ess cells and a non-"ok" status; they are parsed but
 * dropped before plotting.
 */

export const CSV_COLUMNS = [
  "target_family",
  "param",
  "sampler",
  "replicate",
  "seed",
  "k",
  "b",
  "ess",
  "cpu_seconds",
  "ess_per_second",
  "status",
] as const;

export interface RunRow {
  targetFamily: string;
  param: number;
  sampler: string;
  replicate: number;
  k: number;
  ess: number | null;
  essPerSecond: number | null;
  status: string;
}

export class SchemaError extends Error {}

/** Parse CSV text, enforcing the exact benchmark header. */
export function parseRuns(text: string): RunRow[] {
  const lines = text
    .split(/\r?\n/)
    .filter((line) => line.trim().length > 0);
  if (lines.length === 0) {
    throw new SchemaError("empty CSV: no header row");
  }
  const header = lines[0].split(",");
  for (let i = 0; i < CSV_COLUMNS.length; i++) {
    if (header[i] !== CSV_COLUMNS[i]) {
      throw new SchemaError(
        `unexpected column ${i + 1}: got ${JSON.stringify(header[i] ?? "")}, ` +
          `expected "${CSV_COLUMNS[i]}"`,
      );
    }
  }
  if (header.length !== CSV_COLUMNS.length) {
    throw new SchemaError(`unexpected extra column: "${header[CSV_COLUMNS.length]}"`);
  }

  const rows: RunRow[] = [];
  for (const line of lines.slice(1)) {
    const cells = line.split(",");
    if (cells.length !== CSV_COLUMNS.length) {
      throw new SchemaError(`row has ${cells.length} cells: ${line}`);
    }
    const num = (label: string, cell: string): number => {
      const value = Number(cell);
      if (!Number.isFinite(value)) {
        throw new SchemaError(`bad ${label} value: ${JSON.stringify(cell)}`);
      }
      return value;
    };
    rows.push({
      targetFamily: cells[0],
      param: num("param", cells[1]),
      sampler: cells[2],
      replicate: num("replicate", cells[3]),
      k: num("k", cells[5]),
      ess: cells[7] === "" ? null : num("ess", cells[7]),
      essPerSecond: cells[9] === "" ? null : num("ess_per_second", cells[9]),
      status: cells[10],
    });
  }
  if (rows.length === 0) {
    throw new SchemaError("empty CSV: header but no data rows");
  }
  return rows;
}
