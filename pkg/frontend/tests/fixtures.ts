/** Canned API payloads for one dataset. The numbers are deliberately
 * inconsistent with each other (the f1 cells cannot be derived from the
 * tp/fp/fn counts next to them, the Jaccard values do not follow from the
 * label sets, the summary means match nothing): a UI that recomputes any
 * metric instead of displaying the payload verbatim renders different
 * strings and fails the value tests. */

import type {
  DatasetListing,
  InstancesPayload,
  LabelRow,
  SimilarityPayload,
  SummaryPayload,
} from "../src/types.js";

export const DATASET_ID = "fix1";

export const LISTING: DatasetListing = {
  datasets: [
    {
      id: DATASET_ID,
      name: "fixture",
      instances: 4,
      labels: 3,
      runs: 2,
      document_kind: "text",
    },
  ],
};

export const SUMMARY: SummaryPayload = {
  id: DATASET_ID,
  name: "fixture",
  counts: { instances: 4, labels: 3, runs: 2 },
  registry: ["alpha", "beta", "gamma"],
  ground_truth: { cardinality: 1.5 },
  summaries: [
    {
      name: "good",
      cardinality: 1.25,
      mean_f1: 0.77,
      mean_precision: 0.81,
      mean_recall: 0.66,
      mean_jaccard_vs_truth: 0.71,
    },
    {
      // mean_precision undefined: no centroid, "n/a" in the summary card
      name: "noisy",
      cardinality: 0.75,
      mean_f1: 0.41,
      mean_precision: null,
      mean_recall: 0.35,
      mean_jaccard_vs_truth: 0.33,
    },
  ],
} as SummaryPayload & { id: string };

const ALPHA: LabelRow = {
  id: 0,
  name: "alpha",
  gt_frequency: 2,
  metrics: [
    { run: "good", tp: 2, fp: 1, fn: 0, tn: 1, precision: 0.62, recall: 0.93, f1: 0.44 },
    { run: "noisy", tp: 1, fp: 1, fn: 1, tn: 1, precision: 0.5, recall: 0.55, f1: 0.52 },
  ],
};

const BETA: LabelRow = {
  id: 1,
  name: "beta",
  gt_frequency: 3,
  metrics: [
    { run: "good", tp: 3, fp: 0, fn: 0, tn: 1, precision: 0.88, recall: 0.12, f1: 0.97 },
    // precision undefined: no scatter point, but the f1 bar still renders
    { run: "noisy", tp: 0, fp: 0, fn: 3, tn: 1, precision: null, recall: 0.4, f1: 0.21 },
  ],
};

const GAMMA: LabelRow = {
  id: 2,
  name: "gamma",
  gt_frequency: 1,
  metrics: [
    // recall and f1 undefined: no scatter point, "n/a" bar
    { run: "good", tp: 0, fp: 2, fn: 0, tn: 2, precision: 0.3, recall: null, f1: null },
    { run: "noisy", tp: 1, fp: 0, fn: 0, tn: 3, precision: 0.9, recall: 0.8, f1: 0.6 },
  ],
};

/** Row orders the stub serves for each sort request. The descending
 * total-f1 order intentionally differs from id order so a client that
 * re-sorts (or fails to ask the API) is caught. */
export const LABEL_ORDERS: Record<string, LabelRow[]> = {
  "id:asc": [ALPHA, BETA, GAMMA],
  "id:desc": [GAMMA, BETA, ALPHA],
  "gt-frequency:asc": [GAMMA, ALPHA, BETA],
  "gt-frequency:desc": [BETA, ALPHA, GAMMA],
  "total-f1:asc": [GAMMA, ALPHA, BETA],
  "total-f1:desc": [BETA, ALPHA, GAMMA],
};

export const RUNS = ["good", "noisy"];

export const SIMILARITY: SimilarityPayload = {
  parties: ["ground-truth", "good", "noisy"],
  values: [
    [1.0, 0.71, 0.33],
    [0.71, 1.0, 0.52],
    [0.33, 0.52, 1.0],
  ],
  precision: "4",
};

interface FixtureInstance {
  id: string;
  truth: number[];
  predictions: Record<string, { prediction: number[]; jaccard: number }>;
  body: string | null; // null: the document file is gone (410)
}

export const INSTANCES: FixtureInstance[] = [
  {
    id: "i1",
    truth: [0, 1],
    predictions: {
      good: { prediction: [0, 1], jaccard: 0.77 },
      noisy: { prediction: [0], jaccard: 0.5 },
    },
    body: "first document",
  },
  {
    id: "i2",
    truth: [1],
    predictions: {
      good: { prediction: [1, 2], jaccard: 0.5 },
      noisy: { prediction: [], jaccard: 0.0 },
    },
    body: "second one",
  },
  {
    id: "i3",
    truth: [],
    predictions: {
      good: { prediction: [], jaccard: 1.0 },
      noisy: { prediction: [2], jaccard: 0.0 },
    },
    body: "third",
  },
  {
    id: "i4",
    truth: [2],
    predictions: {
      good: { prediction: [2], jaccard: 0.88 },
      noisy: { prediction: [1], jaccard: 0.0 },
    },
    body: null,
  },
];

/** Mirrors the service's filter: the label appears in truth or in at
 * least one run's prediction. */
export function filteredInstances(label: number | null): FixtureInstance[] {
  if (label === null) {
    return INSTANCES;
  }
  return INSTANCES.filter(
    (row) =>
      row.truth.includes(label) ||
      Object.values(row.predictions).some((p) => p.prediction.includes(label)),
  );
}

export function instancesPayload(label: number | null, page: number): InstancesPayload {
  const rows = filteredInstances(label);
  return {
    total: rows.length,
    page,
    page_size: 50,
    instances: rows.map((row) => ({
      id: row.id,
      document: { kind: "text", mime: "text/plain" },
      truth: row.truth,
      runs: RUNS.map((run) => {
        const cell = row.predictions[run] as { prediction: number[]; jaccard: number };
        return { run, prediction: cell.prediction, jaccard: cell.jaccard };
      }),
    })),
  };
}
