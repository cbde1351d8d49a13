import { describe, expect, it } from "vitest";

import { MAX_JITTER_FRACTION, hashString, jitterOffset } from "../src/jitter.js";

describe("point jitter", () => {
  it("is a pure function of the point identity", () => {
    expect(jitterOffset(3, "modelA", 400)).toEqual(jitterOffset(3, "modelA", 400));
    expect(hashString("same")).toBe(hashString("same"));
  });

  it("never exceeds half a percent of the axis span", () => {
    const span = 400;
    for (let label = 0; label < 40; label++) {
      for (const run of ["a", "b", "long-run-name"]) {
        const { dx, dy } = jitterOffset(label, run, span);
        expect(Math.abs(dx)).toBeLessThanOrEqual(MAX_JITTER_FRACTION * span);
        expect(Math.abs(dy)).toBeLessThanOrEqual(MAX_JITTER_FRACTION * span);
      }
    }
  });

  it("spreads coincident points apart", () => {
    const offsets = new Set<string>();
    for (let label = 0; label < 10; label++) {
      const { dx, dy } = jitterOffset(label, "run", 400);
      offsets.add(`${dx.toFixed(6)},${dy.toFixed(6)}`);
    }
    expect(offsets.size).toBeGreaterThan(5);
  });

  it("scales with the axis span", () => {
    const small = jitterOffset(1, "r", 100);
    const large = jitterOffset(1, "r", 1000);
    expect(large.dx).toBeCloseTo(small.dx * 10, 10);
    expect(large.dy).toBeCloseTo(small.dy * 10, 10);
  });
});
