import { describe, expect, it } from "vitest";

import { densityField, fieldQuantiles } from "../src/density.js";
import {
  ISOLINE_QUANTILES,
  computeIsolines,
  contourContains,
  nestingDepth,
} from "../src/marchingSquares.js";

describe("densityField", () => {
  it("peaks at the kernel center", () => {
    const field = densityField([{ x: 0.5, y: 0.5 }], 0.05, [65, 33]);
    let best = -1;
    let bestIdx = -1;
    field.values.forEach((v, i) => {
      if (v > best) {
        best = v;
        bestIdx = i;
      }
    });
    const row = Math.floor(bestIdx / field.cols);
    const col = bestIdx % field.cols;
    expect(col / (field.cols - 1)).toBeCloseTo(0.5, 2);
    expect(row / (field.rows - 1)).toBeCloseTo(0.5, 2);
  });

  it("rejects an empty peak list", () => {
    expect(() => densityField([])).toThrowError(/at least one peak/);
  });

  it("quantiles are monotone", () => {
    const field = densityField([{ x: 0.3, y: 0.4 }, { x: 0.6, y: 0.6 }]);
    const qs = fieldQuantiles(field, [...ISOLINE_QUANTILES]);
    for (let i = 1; i < qs.length; i++) expect(qs[i]).toBeGreaterThanOrEqual(qs[i - 1]);
  });
});

describe("computeIsolines", () => {
  it("a single peak gets concentric closed contours around it", () => {
    const peak = { x: 0.5, y: 0.5 };
    const contours = computeIsolines([peak]);
    const around = contours.filter((c) => contourContains(c, peak));
    expect(around.length).toBeGreaterThanOrEqual(3);
    for (const c of around) expect(c.closed).toBe(true);
    // concentric: distinct levels, all enclosing the same point
    const levels = new Set(around.map((c) => c.level));
    expect(levels.size).toBe(around.length);
  });

  it("two far-apart peaks yield disjoint families at the highest quantile", () => {
    const a = { x: 0.1, y: 0.5 };
    const b = { x: 0.9, y: 0.5 };
    const contours = computeIsolines([a, b]);
    const top = Math.max(...contours.map((c) => c.level));
    const topContours = contours.filter((c) => c.level === top);
    const aroundA = topContours.filter((c) => contourContains(c, a));
    const aroundB = topContours.filter((c) => contourContains(c, b));
    expect(aroundA.length).toBeGreaterThanOrEqual(1);
    expect(aroundB.length).toBeGreaterThanOrEqual(1);
    for (const c of topContours) {
      expect(contourContains(c, a) && contourContains(c, b)).toBe(false);
    }
  });

  it("a clustered archipelago nests deeper than an isolated peak", () => {
    const cluster = [
      { x: 0.2, y: 0.5 },
      { x: 0.23, y: 0.48 },
      { x: 0.17, y: 0.52 },
      { x: 0.2, y: 0.46 },
      { x: 0.22, y: 0.53 },
    ];
    const isolated = { x: 0.8, y: 0.5 };
    const contours = computeIsolines([...cluster, isolated]);
    const clusterDepth = nestingDepth(contours, { x: 0.2, y: 0.5 });
    const isolatedDepth = nestingDepth(contours, isolated);
    expect(clusterDepth).toBeGreaterThan(isolatedDepth);
  });
});
