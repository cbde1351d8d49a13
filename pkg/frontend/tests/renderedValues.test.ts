/** Every number on screen must equal the API payload value after percent
 * formatting, nothing else. The fixture's numbers are internally
 * inconsistent on purpose (f1 does not follow from tp/fp/fn, Jaccard does
 * not follow from the label sets), so a client that recomputes anything
 * renders different strings and fails here. */

import { afterEach, beforeEach, describe, expect, it } from "vitest";

import { formatPercent } from "../src/format.js";
import { luminosity } from "../src/views/similarityMatrix.js";
import { INSTANCES, LABEL_ORDERS, SIMILARITY, SUMMARY } from "./fixtures.js";
import type { BootedApp } from "./helpers.js";
import { bootApp, flush, tearDown } from "./helpers.js";

let booted: BootedApp;

beforeEach(async () => {
  booted = await bootApp();
  await flush();
});

afterEach(() => {
  tearDown(booted);
});

const LABEL_ROWS = LABEL_ORDERS["id:asc"]!;

describe("performance bars", () => {
  it("shows each (label, run) f1 exactly as served, n/a when undefined", () => {
    const { root } = booted;
    for (const row of LABEL_ROWS) {
      for (const cell of row.metrics) {
        const line = root.querySelector(
          `.bar-line[data-label-id="${row.id}"][data-run="${cell.run}"]`,
        ) as HTMLElement;
        expect(line, `${row.name}/${cell.run}`).not.toBeNull();
        const value = line.querySelector("[data-value]") as HTMLElement;
        expect(value.dataset.value).toBe(formatPercent(cell.f1));
        if (cell.f1 === null) {
          expect(value.textContent).toBe("n/a");
          expect(line.querySelector(".bar")).toBeNull(); // no zero-width bar
        } else {
          expect(value.textContent).toBe(formatPercent(cell.f1));
        }
      }
    }
  });

  it("hover text carries the served precision and recall, not derived ones", () => {
    const { root } = booted;
    const line = root.querySelector(
      '.bar-line[data-label-id="0"][data-run="good"]',
    ) as HTMLElement;
    expect(line.title).toContain("F1 44.0%");
    expect(line.title).toContain("precision 62.0%");
    expect(line.title).toContain("recall 93.0%");
  });

  it("summary cards show the served means with n/a for undefined", () => {
    const { root } = booted;
    for (const summary of SUMMARY.summaries) {
      const card = root.querySelector(`.summary-card[data-run="${summary.name}"]`) as HTMLElement;
      const measure = (name: string): string => {
        const line = card.querySelector(`.summary-line[data-measure="${name}"]`) as HTMLElement;
        return (line.querySelector("[data-value]") as HTMLElement).dataset.value as string;
      };
      expect(measure("mean_f1")).toBe(formatPercent(summary.mean_f1));
      expect(measure("mean_precision")).toBe(formatPercent(summary.mean_precision));
      expect(measure("mean_recall")).toBe(formatPercent(summary.mean_recall));
      const cardinality = card.querySelector(
        '.summary-line[data-measure="cardinality"]',
      ) as HTMLElement;
      expect(cardinality.dataset.value).toBe(String(summary.cardinality));
      expect(cardinality.textContent).toContain(String(SUMMARY.ground_truth.cardinality));
    }
  });
});

describe("scatterplot", () => {
  it("plots exactly the (label, run) pairs with both coordinates defined", () => {
    const { root } = booted;
    const plotted = new Set(
      [...root.querySelectorAll(".scatter-hit")].map(
        (hit) => `${hit.getAttribute("data-label-id")}/${hit.getAttribute("data-run")}`,
      ),
    );
    const expected = new Set<string>();
    for (const row of LABEL_ROWS) {
      for (const cell of row.metrics) {
        if (cell.precision !== null && cell.recall !== null) {
          expected.add(`${row.id}/${cell.run}`);
        }
      }
    }
    expect(plotted).toEqual(expected);
  });

  it("each point carries the served precision and recall", () => {
    const { root } = booted;
    for (const row of LABEL_ROWS) {
      for (const cell of row.metrics) {
        if (cell.precision === null || cell.recall === null) continue;
        const hit = root.querySelector(
          `.scatter-hit[data-label-id="${row.id}"][data-run="${cell.run}"]`,
        ) as Element;
        expect(hit.getAttribute("data-value-precision")).toBe(formatPercent(cell.precision));
        expect(hit.getAttribute("data-value-recall")).toBe(formatPercent(cell.recall));
      }
    }
  });

  it("draws one centroid per run with defined means, at the served means", () => {
    const { root } = booted;
    const centroids = [...root.querySelectorAll(".scatter-centroid")];
    expect(centroids).toHaveLength(1); // noisy's mean precision is undefined
    const good = centroids[0] as Element;
    expect(good.getAttribute("data-run")).toBe("good");
    expect(good.getAttribute("data-value-precision")).toBe(formatPercent(0.81));
    expect(good.getAttribute("data-value-recall")).toBe(formatPercent(0.66));
  });

  it("keeps the visual nudge within half a percent and hit targets exact", () => {
    const { root } = booted;
    const span = 420 - 2 * 36;
    for (const hit of root.querySelectorAll(".scatter-hit")) {
      const labelId = hit.getAttribute("data-label-id");
      const run = hit.getAttribute("data-run");
      const dot = root.querySelector(
        `.scatter-point[data-label-id="${labelId}"][data-run="${run}"]`,
      ) as Element;
      const dx = Number(dot.getAttribute("cx")) - Number(hit.getAttribute("cx"));
      const dy = Number(dot.getAttribute("cy")) - Number(hit.getAttribute("cy"));
      expect(Math.abs(dx)).toBeLessThanOrEqual(0.005 * span);
      expect(Math.abs(dy)).toBeLessThanOrEqual(0.005 * span);
    }
  });
});

describe("similarity matrix", () => {
  it("renders every served value as a percentage in its cell", () => {
    const { root } = booted;
    const names = ["Ref", "good", "noisy"];
    for (const [i, rowName] of names.entries()) {
      for (const [j, colName] of names.entries()) {
        const cell = root.querySelector(
          `.similarity-cell[data-row="${rowName}"][data-col="${colName}"]`,
        ) as HTMLElement;
        expect(cell.textContent).toBe(formatPercent(SIMILARITY.values[i]![j]!));
      }
    }
  });

  it("labels the ground truth Ref and shows 100% on the diagonal", () => {
    const { root } = booted;
    const firstHeader = root.querySelector(".similarity-table tr th:nth-child(2)");
    expect(firstHeader?.textContent).toBe("Ref");
    for (const name of ["Ref", "good", "noisy"]) {
      const diagonal = root.querySelector(
        `.similarity-cell[data-row="${name}"][data-col="${name}"]`,
      );
      expect(diagonal?.textContent).toBe("100.0%");
    }
  });

  it("encodes larger values as darker cells, monotonically", () => {
    const flat = SIMILARITY.values.flat().sort((a, b) => a - b);
    for (let i = 1; i < flat.length; i++) {
      expect(luminosity(flat[i]!)).toBeLessThanOrEqual(luminosity(flat[i - 1]!));
    }
    const { root } = booted;
    const cell = root.querySelector(
      '.similarity-cell[data-row="Ref"][data-col="noisy"]',
    ) as HTMLElement;
    expect(cell.style.backgroundColor).toContain(`${luminosity(0.33)}%`);
  });
});

describe("instance agreement bars", () => {
  it("shows each per-run Jaccard exactly as served", () => {
    const { root } = booted;
    for (const instance of INSTANCES) {
      for (const [run, cell] of Object.entries(instance.predictions)) {
        const line = root.querySelector(
          `.jaccard-line[data-instance-id="${instance.id}"][data-run="${run}"]`,
        ) as HTMLElement;
        const value = line.querySelector("[data-value]") as HTMLElement;
        expect(value.dataset.value, `${instance.id}/${run}`).toBe(formatPercent(cell.jaccard));
      }
    }
  });
});

describe("whole-page sweep", () => {
  it("every displayed value string is one the API actually served", () => {
    const { root } = booted;
    const served = new Set<string>(["n/a"]);
    for (const row of LABEL_ROWS) {
      served.add(String(row.gt_frequency));
      for (const cell of row.metrics) {
        served.add(formatPercent(cell.f1));
      }
    }
    for (const summary of SUMMARY.summaries) {
      served.add(String(summary.cardinality));
      served.add(formatPercent(summary.mean_f1));
      served.add(formatPercent(summary.mean_precision));
      served.add(formatPercent(summary.mean_recall));
    }
    for (const value of SIMILARITY.values.flat()) {
      served.add(formatPercent(value));
    }
    for (const instance of INSTANCES) {
      for (const cell of Object.values(instance.predictions)) {
        served.add(formatPercent(cell.jaccard));
      }
    }
    const displayed = [...root.querySelectorAll("[data-value]")];
    expect(displayed.length).toBeGreaterThan(20);
    for (const element of displayed) {
      const value =
        (element as HTMLElement).dataset?.value ?? element.getAttribute("data-value");
      expect(served.has(value as string), `unexpected rendered value ${value}`).toBe(true);
    }
  });
});
