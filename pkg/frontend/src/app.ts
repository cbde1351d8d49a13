/** Wires the store, the API client, and the four views together. Views
 * dispatch events into the store; the app reacts to state changes by
 * refetching exactly what the change invalidated (with stale responses
 * discarded) and re-rendering. All data flows from the API; the client
 * adds nothing but percent formatting. */

import { ApiClient } from "./api.js";
import { paletteOverflow, runStyle } from "./palette.js";
import { initialViewState, ViewStateStore } from "./state.js";
import type { SortKey, ViewState } from "./state.js";
import { DotChart } from "./views/dotChart.js";
import { PerformanceBars } from "./views/performanceBars.js";
import { PrScatterplot } from "./views/prScatterplot.js";
import { SimilarityMatrixView } from "./views/similarityMatrix.js";
import type {
  DatasetInfo,
  InstancesPayload,
  LabelsPayload,
  SimilarityPayload,
  SummaryPayload,
} from "./types.js";

interface LoadedData {
  summary: SummaryPayload;
  labels: LabelsPayload;
  similarity: SimilarityPayload;
  instances: InstancesPayload;
}

export class App {
  readonly store = new ViewStateStore();

  private datasetId: string | null = null;
  private datasets: DatasetInfo[] = [];
  private data: LoadedData | null = null;
  private lastState: ViewState = initialViewState();

  private instanceRequest = 0;
  private labelsRequest = 0;
  private textCache = new Map<string, Promise<import("./types.js").DocumentResult>>();

  private controls!: HTMLElement;
  private banner!: HTMLElement;
  private dotChart!: DotChart;
  private bars!: PerformanceBars;
  private scatter!: PrScatterplot;
  private matrix!: SimilarityMatrixView;

  constructor(
    private readonly root: HTMLElement,
    private readonly api: ApiClient = new ApiClient(),
  ) {}

  async start(): Promise<void> {
    this.buildSkeleton();
    const listing = await this.api.listDatasets();
    this.datasets = listing.datasets;
    if (this.datasets.length === 0) {
      this.banner.textContent = "no datasets loaded; upload one through the API";
      this.banner.hidden = false;
      return;
    }
    this.renderControls();
    this.store.subscribe((state) => {
      void this.onStateChange(state);
    });
    await this.selectDataset((this.datasets[0] as DatasetInfo).id);
  }

  private buildSkeleton(): void {
    this.root.textContent = "";
    this.controls = document.createElement("nav");
    this.controls.className = "controls";
    this.banner = document.createElement("div");
    this.banner.className = "warning-banner";
    this.banner.hidden = true;

    const barsBox = document.createElement("section");
    barsBox.id = "performance-bars";
    const scatterBox = document.createElement("section");
    scatterBox.id = "pr-scatterplot";
    const matrixBox = document.createElement("section");
    matrixBox.id = "similarity-matrix";
    const dotBox = document.createElement("section");
    dotBox.id = "dot-chart";

    this.root.append(this.controls, this.banner, barsBox, scatterBox, matrixBox, dotBox);

    const dispatch = this.store.syncSelection.bind(this.store);
    this.bars = new PerformanceBars(barsBox, dispatch, runStyle);
    this.scatter = new PrScatterplot(scatterBox, dispatch, runStyle);
    this.matrix = new SimilarityMatrixView(matrixBox, dispatch);
    this.dotChart = new DotChart(dotBox, dispatch, {
      // memoized: hover-driven re-renders must not refetch every body
      fetchText: (instanceId) => {
        const key = `${this.datasetId}/${instanceId}`;
        let pending = this.textCache.get(key);
        if (!pending) {
          pending = this.api.fetchDocument(this.datasetId ?? "", instanceId);
          this.textCache.set(key, pending);
        }
        return pending;
      },
      mediaUrl: (instanceId) => this.api.documentUrl(this.datasetId ?? "", instanceId),
      styleFor: runStyle,
    });
  }

  private renderControls(): void {
    this.controls.textContent = "";

    const datasetSelect = document.createElement("select");
    datasetSelect.className = "dataset-select";
    for (const info of this.datasets) {
      const option = document.createElement("option");
      option.value = info.id;
      option.textContent = `${info.name} (${info.instances}×${info.labels}, ${info.runs} runs)`;
      datasetSelect.append(option);
    }
    datasetSelect.addEventListener("change", () => {
      void this.selectDataset(datasetSelect.value);
    });
    this.controls.append(datasetSelect);

    const sortSelect = document.createElement("select");
    sortSelect.className = "sort-select";
    for (const key of ["id", "gt-frequency", "total-f1"] as SortKey[]) {
      for (const direction of ["asc", "desc"] as const) {
        const option = document.createElement("option");
        option.value = `${key}:${direction}`;
        option.textContent = `sort ${key} ${direction}`;
        sortSelect.append(option);
      }
    }
    sortSelect.addEventListener("change", () => {
      const [key, direction] = sortSelect.value.split(":") as [SortKey, "asc" | "desc"];
      this.store.syncSelection({ type: "set-sort", key, direction });
    });
    this.controls.append(sortSelect);

    const flip = document.createElement("button");
    flip.className = "flip-toggle";
    flip.textContent = "flip orientation";
    flip.addEventListener("click", () => {
      const next =
        this.store.get().barOrientation === "per-label" ? "per-classifier" : "per-label";
      this.store.syncSelection({ type: "set-orientation", orientation: next });
    });
    this.controls.append(flip);

    const stack = document.createElement("button");
    stack.className = "stack-toggle";
    stack.textContent = "toggle stacked";
    stack.addEventListener("click", () => {
      const next = this.store.get().barMode === "grouped" ? "stacked" : "grouped";
      this.store.syncSelection({ type: "set-bar-mode", mode: next });
    });
    this.controls.append(stack);

    const clear = document.createElement("button");
    clear.className = "clear-selection";
    clear.textContent = "clear selection";
    clear.addEventListener("click", () => {
      this.store.syncSelection({ type: "deselect" });
    });
    this.controls.append(clear);
  }

  async selectDataset(datasetId: string): Promise<void> {
    // park rendering while we swap; label ids are dataset-specific, so an
    // active selection must not leak into the next dataset's queries
    this.data = null;
    this.textCache.clear();
    if (this.store.get().selectedLabel !== null || this.store.get().instancePage !== 0) {
      this.store.syncSelection({ type: "deselect" });
    }
    this.datasetId = datasetId;
    const state = this.store.get();
    const [summary, labels, similarity, instances] = await Promise.all([
      this.api.summary(datasetId),
      this.api.labels(datasetId, this.labelsQuery(state)),
      this.api.similarity(datasetId),
      this.api.instances(datasetId, this.instancesQuery(state)),
    ]);
    this.data = { summary, labels, similarity, instances };
    this.banner.hidden = !paletteOverflow(summary.counts.runs);
    if (!this.banner.hidden) {
      this.banner.textContent =
        `${summary.counts.runs} runs exceed the ${9}-color palette; ` +
        "colors repeat with pattern overlays";
    }
    this.renderAll(state);
  }

  /** Stacked mode always displays the API's descending total-F1 order;
   * otherwise the user's sort choice is passed through. */
  private labelsQuery(state: ViewState): { sort: string; direction: string } {
    if (state.barMode === "stacked") {
      return { sort: "total-f1", direction: "desc" };
    }
    return { sort: state.sortKey, direction: state.sortDirection };
  }

  private instancesQuery(state: ViewState): { label: number | null; page: number } {
    return { label: state.selectedLabel, page: state.instancePage };
  }

  private async onStateChange(state: ViewState): Promise<void> {
    const previous = this.lastState;
    this.lastState = state;
    if (this.datasetId === null || this.data === null) {
      return;
    }

    const filterChanged =
      state.selectedLabel !== previous.selectedLabel ||
      state.instancePage !== previous.instancePage;
    const labelsChanged =
      state.sortKey !== previous.sortKey ||
      state.sortDirection !== previous.sortDirection ||
      state.barMode !== previous.barMode;

    const work: Promise<void>[] = [];
    if (filterChanged) {
      const ticket = ++this.instanceRequest;
      work.push(
        this.api.instances(this.datasetId, this.instancesQuery(state)).then((page) => {
          if (ticket === this.instanceRequest && this.data) {
            this.data.instances = page;
          }
        }),
      );
    }
    if (labelsChanged) {
      const ticket = ++this.labelsRequest;
      work.push(
        this.api.labels(this.datasetId, this.labelsQuery(state)).then((labels) => {
          if (ticket === this.labelsRequest && this.data) {
            this.data.labels = labels;
          }
        }),
      );
    }
    await Promise.all(work);
    this.renderAll(this.store.get());
  }

  private renderAll(state: ViewState): void {
    if (this.data === null || this.datasetId === null) {
      return;
    }
    this.bars.render({ labels: this.data.labels, summary: this.data.summary }, state);
    this.scatter.render({ labels: this.data.labels, summary: this.data.summary }, state);
    this.matrix.render(this.data.similarity, state);
    this.dotChart.render(
      {
        registry: this.data.summary.registry,
        runs: this.data.labels.runs,
        page: this.data.instances,
        datasetId: this.datasetId,
      },
      state,
    );
  }
}
