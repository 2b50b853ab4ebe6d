const HEADER =
  "target_family,param,sampler,replicate,seed,k,b,ess," +
  "cpu_seconds,ess_per_second,status";

export function runRow(
  family: string,
  param: number,
  sampler: string,
  replicate: number,
  ess: number,
  perSec: number,
): string {
  return [
    family,
    param,
    sampler,
    replicate,
    1000 + replicate,
    10000,
    500,
    ess,
    1.5,
    perSec,
    "ok",
  ].join(",");
}

/** Two families, two samplers, three replicates per grid point. */
export function fixtureCsv(): string {
  const lines = [HEADER];
  for (const [family, params] of [
    ["poisson", [1, 5, 10]],
    ["sk", [0.25, 0.5]],
  ] as const) {
    for (const param of params) {
      for (const sampler of ["pps", "bd"]) {
        for (let rep = 0; rep < 3; rep++) {
          const base = sampler === "pps" ? 900 : 500;
          lines.push(
            runRow(family, param, sampler, rep, base + 40 * rep, base / 10 + rep),
          );
        }
      }
    }
  }
  return lines.join("\n") + "\n";
}

export { HEADER };
