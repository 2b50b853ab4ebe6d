import { describe, expect, it } from "vitest";
import { parseRuns } from "../src/csv.js";
import { renderFigure } from "../src/svg.js";
import { fixtureCsv, HEADER, runRow } from "./fixture.js";

describe("renderFigure", () => {
  it("renders one panel row pair per family", () => {
    const svg = renderFigure(parseRuns(fixtureCsv()));
    expect(svg.match(/class="panel"/g)).toHaveLength(4); // 2 rows x 2 families
    expect(svg).toContain('class="series series-pps"');
    expect(svg).toContain('class="series series-bd"');
    expect(svg.match(/class="errorbar"/g)!.length).toBeGreaterThan(0);
    expect(svg.startsWith("<svg")).toBe(true);
    expect(svg.endsWith("</svg>")).toBe(true);
  });

  it("is deterministic", () => {
    const rows = parseRuns(fixtureCsv());
    expect(renderFigure(rows)).toBe(renderFigure(rows));
  });

  it("applies the family filter", () => {
    const svg = renderFigure(parseRuns(fixtureCsv()), ["poisson"]);
    expect(svg.match(/class="panel"/g)).toHaveLength(2);
    expect(svg).not.toContain('data-family="sk"');
  });

  it("single grid point draws markers but no connecting line", () => {
    const csv =
      HEADER + "\n" + runRow("sk", 0.5, "pps", 0, 100, 10) + "\n";
    const svg = renderFigure(parseRuns(csv));
    const series = svg.split('class="series series-pps"')[1].split("</g>")[0];
    expect(series).toContain("<circle");
    expect(series).not.toContain("<path");
  });

  it("errors when the filter removes everything", () => {
    expect(() => renderFigure(parseRuns(fixtureCsv()), ["neural"])).toThrow(
      /no plottable families/,
    );
  });
});
