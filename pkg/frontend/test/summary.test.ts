import { describe, expect, it } from "vitest";
import { parseRuns } from "../src/csv.js";
import { meanCi, summarizeFamily, tQuantile975 } from "../src/summary.js";
import { fixtureCsv, HEADER, runRow } from "./fixture.js";

describe("meanCi", () => {
  it("single value has no interval", () => {
    expect(meanCi([3])).toEqual({ mean: 3, ci: null });
  });

  it("identical values have zero width", () => {
    expect(meanCi([2, 2, 2]).ci).toBe(0);
  });

  it("two values use the df=1 t quantile", () => {
    const { mean, ci } = meanCi([100, 200]);
    expect(mean).toBe(150);
    // sd = 70.71, se = 50, t = 12.7062
    expect(ci).toBeCloseTo(12.7062 * 50, 1);
  });

  it("t quantile approaches the normal value", () => {
    expect(tQuantile975(1)).toBeCloseTo(12.7062);
    expect(tQuantile975(100)).toBe(1.96);
  });
});

describe("summarizeFamily", () => {
  it("groups replicates and sorts by parameter", () => {
    const series = summarizeFamily(parseRuns(fixtureCsv()), "poisson");
    expect(series.map((s) => s.sampler)).toEqual(["bd", "pps"]);
    const pps = series[1];
    expect(pps.points.map((p) => p.param)).toEqual([1, 5, 10]);
    expect(pps.points[0].n).toBe(3);
    // ess 900, 940, 980 over k=10000, scaled to 1000 samples
    expect(pps.points[0].meanEssPer1000).toBeCloseTo(94);
    expect(pps.points[0].ciEssPer1000).toBeGreaterThan(0);
  });

  it("drops failed runs", () => {
    const csv =
      HEADER +
      "\n" +
      runRow("sk", 0.5, "pps", 0, 100, 10) +
      "\npoisson,1,bd,0,7,0,500,,0.5,,not-positive-definite:target\n";
    expect(summarizeFamily(parseRuns(csv), "poisson")).toHaveLength(0);
    expect(summarizeFamily(parseRuns(csv), "sk")).toHaveLength(1);
  });
});
