/** Thin fetch wrapper over the evaluation service. All numbers shown in
 * the UI come from these payloads; the client never recomputes a metric. */

import type {
  DatasetListing,
  DocumentResult,
  InstancesPayload,
  LabelsPayload,
  SimilarityPayload,
  SummaryPayload,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly url: string,
    detail: string,
  ) {
    super(`${status} from ${url}: ${detail}`);
  }
}

export interface LabelsQuery {
  sort?: string;
  direction?: string;
  run?: string;
}

export interface InstancesQuery {
  label?: number | null;
  page?: number;
  pageSize?: number;
}

export class ApiClient {
  constructor(private readonly base: string = "") {}

  private url(path: string, params?: Record<string, string>): string {
    const query = params ? new URLSearchParams(params).toString() : "";
    return this.base + path + (query ? `?${query}` : "");
  }

  private async getJson<T>(url: string, signal?: AbortSignal): Promise<T> {
    const response = await fetch(url, { signal });
    if (!response.ok) {
      const detail = await response.text().catch(() => "");
      throw new ApiError(response.status, url, detail);
    }
    return (await response.json()) as T;
  }

  listDatasets(signal?: AbortSignal): Promise<DatasetListing> {
    return this.getJson(this.url("/api/v1/datasets"), signal);
  }

  summary(datasetId: string, signal?: AbortSignal): Promise<SummaryPayload> {
    return this.getJson(this.url(`/api/v1/datasets/${datasetId}/summary`), signal);
  }

  labels(datasetId: string, query: LabelsQuery = {}, signal?: AbortSignal): Promise<LabelsPayload> {
    const params: Record<string, string> = {};
    if (query.sort) params.sort = query.sort;
    if (query.direction) params.direction = query.direction;
    if (query.run) params.run = query.run;
    return this.getJson(this.url(`/api/v1/datasets/${datasetId}/labels`, params), signal);
  }

  similarity(datasetId: string, signal?: AbortSignal): Promise<SimilarityPayload> {
    return this.getJson(this.url(`/api/v1/datasets/${datasetId}/similarity`), signal);
  }

  instances(
    datasetId: string,
    query: InstancesQuery = {},
    signal?: AbortSignal,
  ): Promise<InstancesPayload> {
    const params: Record<string, string> = {};
    if (query.label !== null && query.label !== undefined) params.label = String(query.label);
    if (query.page !== undefined) params.page = String(query.page);
    if (query.pageSize !== undefined) params.page_size = String(query.pageSize);
    return this.getJson(this.url(`/api/v1/datasets/${datasetId}/instances`, params), signal);
  }

  /** Stable URL for media payloads; handed to <img>/<audio> so the browser
   * streams them on demand (the service honors Range requests). */
  documentUrl(datasetId: string, instanceId: string): string {
    return this.url(`/api/v1/datasets/${datasetId}/instances/${instanceId}/document`);
  }

  /** Fetch a text document body. 204/410/404 are expected outcomes the dot
   * chart renders as placeholders, not errors. */
  async fetchDocument(
    datasetId: string,
    instanceId: string,
    signal?: AbortSignal,
  ): Promise<DocumentResult> {
    const response = await fetch(this.documentUrl(datasetId, instanceId), { signal });
    if (response.status === 200) {
      return { status: 200, text: await response.text() };
    }
    return { status: response.status, text: null };
  }
}
