/** Wire types for the evaluation service under /api/v1. Field names match
 * the JSON payloads exactly; `null` marks an undefined measure (a metric
 * whose denominator is zero), which the UI must render as "n/a". */

export type Metric = number | null;

export interface DatasetInfo {
  id: string;
  name: string;
  instances: number;
  labels: number;
  runs: number;
  document_kind: string;
}

export interface DatasetListing {
  datasets: DatasetInfo[];
}

export interface RunSummary {
  name: string;
  cardinality: number;
  mean_f1: number;
  mean_precision: Metric;
  mean_recall: Metric;
  mean_jaccard_vs_truth: number;
}

export interface SummaryPayload {
  id: string;
  name: string;
  counts: { instances: number; labels: number; runs: number };
  registry: string[];
  ground_truth: { cardinality: number };
  summaries: RunSummary[];
}

export interface LabelCell {
  run: string;
  tp: number;
  fp: number;
  fn: number;
  tn: number;
  precision: Metric;
  recall: Metric;
  f1: Metric;
}

export interface LabelRow {
  id: number;
  name: string;
  gt_frequency: number;
  metrics: LabelCell[];
}

export interface LabelsPayload {
  sort: string;
  direction: string;
  run: string | null;
  runs: string[];
  labels: LabelRow[];
}

export interface SimilarityPayload {
  parties: string[];
  values: number[][];
  precision: string;
}

export interface InstanceRun {
  run: string;
  prediction: number[];
  jaccard: number;
}

export interface InstanceRow {
  id: string;
  document: { kind: string; mime: string };
  truth: number[];
  runs: InstanceRun[];
}

export interface InstancesPayload {
  total: number;
  page: number;
  page_size: number;
  instances: InstanceRow[];
}

/** Outcome of fetching one instance's document body. */
export interface DocumentResult {
  status: number;
  text: string | null;
}
