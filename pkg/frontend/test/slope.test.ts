import { describe, expect, it } from "vitest";
import { ConvergenceRow } from "../src/csv.js";
import { fitSlopes, leastSquaresSlope } from "../src/convergence.js";

function row(n: number, l1: number, scheme = "grp", variable = "f"): ConvergenceRow {
  return { n, scheme, variable, l1, wallSeconds: 1 };
}

describe("leastSquaresSlope", () => {
  it("recovers an exact line", () => {
    expect(leastSquaresSlope([[0, 3], [1, 1], [2, -1]])).toBeCloseTo(-2, 14);
  });

  it("fits symmetric noise through the middle", () => {
    // residuals +-0.1 at the ends cancel: slope of the underlying line
    expect(leastSquaresSlope([[0, 0.1], [1, 1], [2, 1.9]])).toBeCloseTo(0.9, 14);
  });
});

describe("fitSlopes", () => {
  const NS = [20, 40, 80, 160, 320, 640];

  it("recovers the exact order from clean power-law data", () => {
    const rows = NS.map((n) => row(n, 3.7 * n ** -2));
    const fit = fitSlopes(rows, "f").get("grp")!;
    expect(fit.slope).toBeCloseTo(-2, 10);
    expect(fit.points.map(([n]) => n)).toEqual(NS);
  });

  it("uses only the three finest mesh sizes", () => {
    // corrupt every coarse row; the fit must not notice
    const rows = NS.map((n) => row(n, n <= 80 ? 10 * 3.7 * n ** -2 : 3.7 * n ** -2));
    expect(fitSlopes(rows, "f").get("grp")!.slope).toBeCloseTo(-2, 10);
  });

  it("fits first-order data to -1", () => {
    const rows = NS.map((n) => row(n, 0.8 / n));
    expect(fitSlopes(rows, "f").get("grp")!.slope).toBeCloseTo(-1, 10);
  });

  it("separates schemes and filters by variable", () => {
    const rows = [
      ...NS.map((n) => row(n, 3.7 * n ** -2, "grp")),
      ...NS.map((n) => row(n, 0.8 / n, "muscl")),
      ...NS.map((n) => row(n, 123 * n ** -3, "grp", "b")),
    ];
    const fits = fitSlopes(rows, "f");
    expect([...fits.keys()].sort()).toEqual(["grp", "muscl"]);
    expect(fits.get("grp")!.slope).toBeCloseTo(-2, 10);
    expect(fits.get("muscl")!.slope).toBeCloseTo(-1, 10);
  });

  it("accepts two mesh sizes (exact two-point slope)", () => {
    const fit = fitSlopes([row(320, 4e-4), row(640, 1e-4)], "f").get("grp")!;
    expect(fit.slope).toBeCloseTo(Math.log(4) / Math.log(0.5), 12);
  });

  it("rejects a single mesh size", () => {
    expect(() => fitSlopes([row(640, 1e-4), row(640, 2e-4, "grp", "b")], "f")).toThrow(
      /at least two mesh sizes/
    );
  });

  it("rejects an unknown variable", () => {
    expect(() => fitSlopes([row(20, 1)], "z")).toThrow(/no rows for variable 'z'/);
  });
});
