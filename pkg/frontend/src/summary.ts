/**
 * Replicate aggregation: per (family, param, sampler) means with 95%
 * confidence half-widths from the Student t distribution.
 */

import { RunRow } from "./csv.js";

export interface SeriesPoint {
  param: number;
  n: number;
  meanEssPer1000: number;
  ciEssPer1000: number | null; // null with a single replicate
  meanEssPerSecond: number;
  ciEssPerSecond: number | null;
}

export interface SamplerSeries {
  sampler: string;
  points: SeriesPoint[]; // sorted by param
}

// two-sided 97.5% quantiles of t_df; beyond df=30 the normal value is used
const T_975 = [
  12.7062, 4.3027, 3.1824, 2.7764, 2.5706, 2.4469, 2.3646, 2.306, 2.2622,
  2.2281, 2.201, 2.1788, 2.1604, 2.1448, 2.1314, 2.1199, 2.1098, 2.1009,
  2.093, 2.086, 2.0796, 2.0739, 2.0687, 2.0639, 2.0595, 2.0555, 2.0518,
  2.0484, 2.0452, 2.0423,
];

export function tQuantile975(df: number): number {
  if (df < 1) throw new Error(`t quantile needs df >= 1, got ${df}`);
  return df <= T_975.length ? T_975[df - 1] : 1.96;
}

export function meanCi(values: number[]): { mean: number; ci: number | null } {
  const n = values.length;
  const mean = values.reduce((a, b) => a + b, 0) / n;
  if (n < 2) return { mean, ci: null };
  const variance =
    values.reduce((a, v) => a + (v - mean) * (v - mean), 0) / (n - 1);
  const ci = (tQuantile975(n - 1) * Math.sqrt(variance)) / Math.sqrt(n);
  return { mean, ci };
}

/** Successful rows of one family, grouped into one series per sampler. */
export function summarizeFamily(rows: RunRow[], family: string): SamplerSeries[] {
  const groups = new Map<string, Map<number, RunRow[]>>();
  for (const row of rows) {
    if (row.targetFamily !== family) continue;
    if (row.ess === null || row.essPerSecond === null) continue;
    if (!row.status.startsWith("ok")) continue;
    let byParam = groups.get(row.sampler);
    if (!byParam) {
      byParam = new Map();
      groups.set(row.sampler, byParam);
    }
    const bucket = byParam.get(row.param) ?? [];
    bucket.push(row);
    byParam.set(row.param, bucket);
  }

  const series: SamplerSeries[] = [];
  for (const [sampler, byParam] of groups) {
    const points: SeriesPoint[] = [];
    for (const [param, bucket] of byParam) {
      const scaled = bucket.map((r) => (r.ess! * 1000) / r.k);
      const perSec = bucket.map((r) => r.essPerSecond!);
      const essStat = meanCi(scaled);
      const secStat = meanCi(perSec);
      points.push({
        param,
        n: bucket.length,
        meanEssPer1000: essStat.mean,
        ciEssPer1000: essStat.ci,
        meanEssPerSecond: secStat.mean,
        ciEssPerSecond: secStat.ci,
      });
    }
    points.sort((a, b) => a.param - b.param);
    series.push({ sampler, points });
  }
  series.sort((a, b) => a.sampler.localeCompare(b.sampler));
  return series;
}
