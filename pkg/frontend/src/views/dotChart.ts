/** Per-instance view: the document preview, a Jaccard bar per run, then
 * one dot row per run with dots laid on a shared label axis so the same
 * label lines up vertically in every row. The ground truth gets its own
 * dedicated first row; in run rows, a dot whose label is missing from the
 * truth is drawn in the out-of-truth style. Filtering by the selected
 * label happens server-side: the app refetches the instance page with the
 * label parameter, this view just renders what it is given. */

import { formatPercent } from "../format.js";
import type { RunStyle } from "../palette.js";
import type { SelectionEvent, ViewState } from "../state.js";
import type { DocumentResult, InstanceRow, InstancesPayload } from "../types.js";

export interface DotChartData {
  registry: string[];
  runs: string[];
  page: InstancesPayload;
  datasetId: string;
}

export interface DotChartOptions {
  /** resolves a text document body; media kinds use mediaUrl instead */
  fetchText: (instanceId: string) => Promise<DocumentResult>;
  mediaUrl: (instanceId: string) => string;
  styleFor: (runIndex: number) => RunStyle;
}

export class DotChart {
  constructor(
    private readonly root: HTMLElement,
    private readonly dispatch: (event: SelectionEvent) => void,
    private readonly options: DotChartOptions,
  ) {}

  render(data: DotChartData, state: ViewState): void {
    this.root.textContent = "";
    this.root.classList.add("dot-chart");

    const heading = document.createElement("h2");
    heading.textContent = "Instances";
    this.root.append(heading);

    if (state.selectedLabel !== null) {
      const filterNote = document.createElement("p");
      filterNote.className = "filter-note";
      const labelName = data.registry[state.selectedLabel] ?? `#${state.selectedLabel}`;
      filterNote.textContent = `showing instances involving “${labelName}”`;
      this.root.append(filterNote);
    }

    if (data.page.instances.length === 0) {
      const empty = document.createElement("p");
      empty.className = "notice empty-chart";
      empty.textContent =
        state.selectedLabel === null
          ? "no instances in this dataset"
          : "no instance carries the selected label in truth or any prediction";
      this.root.append(empty);
      return;
    }

    const list = document.createElement("div");
    list.className = "instance-list";
    for (const row of data.page.instances) {
      list.append(this.instanceCard(row, data, state));
    }
    this.root.append(list);

    this.root.append(this.pager(data.page, state));
  }

  private instanceCard(row: InstanceRow, data: DotChartData, state: ViewState): HTMLElement {
    const card = document.createElement("article");
    card.className = "instance-card";
    card.dataset.instanceId = row.id;

    const header = document.createElement("header");
    const title = document.createElement("strong");
    title.textContent = row.id;
    header.append(title);
    card.append(header);

    card.append(this.documentPreview(row));

    // one agreement bar per run, above the dot rows
    const jaccardStrip = document.createElement("div");
    jaccardStrip.className = "jaccard-strip";
    for (const runCell of row.runs) {
      const style = this.options.styleFor(data.runs.indexOf(runCell.run));
      const line = document.createElement("div");
      line.className = "jaccard-line";
      line.dataset.run = runCell.run;
      line.dataset.instanceId = row.id;
      line.title = `${runCell.run} agreement with truth: ${formatPercent(runCell.jaccard)}`;

      const bar = document.createElement("span");
      bar.className = `bar ${style.patternClass}`.trim();
      bar.style.backgroundColor = style.color;
      bar.style.width = formatPercent(runCell.jaccard);
      line.append(bar);

      const text = document.createElement("span");
      text.className = "bar-value";
      text.dataset.value = formatPercent(runCell.jaccard);
      text.textContent = formatPercent(runCell.jaccard);
      line.append(text);
      jaccardStrip.append(line);
    }
    card.append(jaccardStrip);

    const truthSet = new Set(row.truth);
    card.append(this.dotRow("truth", row.truth, truthSet, data, state, null));
    for (const runCell of row.runs) {
      card.append(
        this.dotRow(runCell.run, runCell.prediction, truthSet, data, state,
          this.options.styleFor(data.runs.indexOf(runCell.run))),
      );
    }
    return card;
  }

  /** One row on the shared label axis. style === null marks the dedicated
   * ground-truth row. */
  private dotRow(
    rowName: string,
    members: number[],
    truthSet: Set<number>,
    data: DotChartData,
    state: ViewState,
    style: RunStyle | null,
  ): HTMLElement {
    const rowBox = document.createElement("div");
    rowBox.className = style === null ? "dot-row truth-row" : "dot-row run-row";
    rowBox.dataset.row = rowName;

    const caption = document.createElement("span");
    caption.className = "dot-row-caption";
    caption.textContent = rowName;
    rowBox.append(caption);

    const axis = document.createElement("div");
    axis.className = "label-axis";
    axis.style.display = "grid";
    // same column per label in every row keeps dots vertically aligned
    axis.style.gridTemplateColumns = `repeat(${data.registry.length}, 1.2em)`;
    const memberSet = new Set(members);
    for (let labelId = 0; labelId < data.registry.length; labelId++) {
      const cell = document.createElement("span");
      cell.className = "axis-cell";
      cell.dataset.labelId = String(labelId);
      cell.style.gridColumnStart = String(labelId + 1);
      if (memberSet.has(labelId)) {
        const dot = document.createElement("span");
        dot.className = "dot";
        dot.dataset.labelId = String(labelId);
        if (style === null) {
          dot.classList.add("truth");
        } else {
          dot.style.backgroundColor = style.color;
          if (!truthSet.has(labelId)) {
            // prediction outside the ground truth: distinct muted style
            dot.classList.add("outside-truth");
          }
        }
        if (state.selectedLabel === labelId) {
          dot.classList.add("selected");
        }
        dot.title = `${data.registry[labelId]} (${rowName})`;
        dot.addEventListener("click", () => {
          this.dispatch({ type: "toggle-label", label: labelId });
        });
        cell.append(dot);
      }
      axis.append(cell);
    }
    rowBox.append(axis);
    return rowBox;
  }

  private documentPreview(row: InstanceRow): HTMLElement {
    const box = document.createElement("div");
    box.className = "document-preview";
    box.dataset.kind = row.document.kind;
    switch (row.document.kind) {
      case "text": {
        const body = document.createElement("pre");
        body.className = "document-text";
        body.textContent = "…";
        this.options
          .fetchText(row.id)
          .then((result) => {
            if (result.status === 200 && result.text !== null) {
              body.textContent = result.text;
            } else {
              body.replaceWith(this.missingNotice(result.status));
            }
          })
          .catch(() => {
            body.replaceWith(this.missingNotice(0));
          });
        box.append(body);
        break;
      }
      case "image": {
        const img = document.createElement("img");
        img.className = "document-image";
        img.loading = "lazy";
        img.src = this.options.mediaUrl(row.id);
        img.alt = `document for ${row.id}`;
        box.append(img);
        break;
      }
      case "audio": {
        const audio = document.createElement("audio");
        audio.className = "document-audio";
        audio.controls = true;
        audio.preload = "none"; // fetched only when played
        audio.src = this.options.mediaUrl(row.id);
        box.append(audio);
        break;
      }
      default:
        // document_kind "none": nothing to preview
        break;
    }
    return box;
  }

  private missingNotice(status: number): HTMLElement {
    const notice = document.createElement("p");
    notice.className = "notice document-missing";
    notice.textContent =
      status === 410 ? "document file missing (410)" : "document unavailable";
    return notice;
  }

  private pager(page: InstancesPayload, state: ViewState): HTMLElement {
    const pager = document.createElement("nav");
    pager.className = "pager";

    const prev = document.createElement("button");
    prev.textContent = "previous";
    prev.disabled = page.page === 0;
    prev.addEventListener("click", () => {
      this.dispatch({ type: "set-page", page: state.instancePage - 1 });
    });

    const status = document.createElement("span");
    const pages = Math.max(1, Math.ceil(page.total / page.page_size));
    status.textContent = `page ${page.page + 1} of ${pages} (${page.total} instances)`;

    const next = document.createElement("button");
    next.textContent = "next";
    next.disabled = (page.page + 1) * page.page_size >= page.total;
    next.addEventListener("click", () => {
      this.dispatch({ type: "set-page", page: state.instancePage + 1 });
    });

    pager.append(prev, status, next);
    return pager;
  }
}
