import { describe, expect, it } from "vitest";
import { parseRuns, SchemaError } from "../src/csv.js";
import { fixtureCsv, HEADER, runRow } from "./fixture.js";

describe("parseRuns", () => {
  it("parses the fixture", () => {
    const rows = parseRuns(fixtureCsv());
    expect(rows).toHaveLength(30);
    expect(rows[0].targetFamily).toBe("poisson");
    expect(rows[0].param).toBe(1);
    expect(rows[0].ess).toBe(900);
  });

  it("rejects an empty file", () => {
    expect(() => parseRuns("")).toThrow(SchemaError);
  });

  it("rejects a header-only file", () => {
    expect(() => parseRuns(HEADER + "\n")).toThrow(/no data rows/);
  });

  it("names the offending column on a schema mismatch", () => {
    const bad = HEADER.replace("cpu_seconds", "runtime");
    expect(() => parseRuns(bad + "\n" + runRow("poisson", 1, "pps", 0, 1, 1)))
      .toThrow(/column 9.*"runtime".*"cpu_seconds"/);
  });

  it("rejects extra columns", () => {
    const bad = HEADER + ",extra";
    expect(() => parseRuns(bad + "\n")).toThrow(/extra column/);
  });

  it("keeps empty ess cells as null", () => {
    const line =
      "poisson,1,bd,0,7,0,500,,0.5,,not-positive-definite:target";
    const rows = parseRuns(HEADER + "\n" + line + "\n");
    expect(rows[0].ess).toBeNull();
    expect(rows[0].status).toMatch(/^not-positive/);
  });

  it("rejects non-numeric cells", () => {
    const line = "poisson,abc,pps,0,1,10,5,1,1,1,ok";
    expect(() => parseRuns(HEADER + "\n" + line + "\n")).toThrow(/param/);
  });
});
