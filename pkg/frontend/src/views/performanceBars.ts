/** F1 bars for every (label, run) pair plus per-run summary bars on top.
 * Orientation groups the same bars by label or by run; stacked mode lays
 * each label's bars end to end in one row. Both are pure re-layouts: the
 * set of (label, run, value) triples never changes, and in stacked mode
 * the row order is exactly the order the API served (the app requests the
 * descending total-F1 sort; no ordering happens client-side).
 * An undefined value renders as "n/a" text, never as a zero-width bar. */

import { formatCount, formatPercent } from "../format.js";
import type { RunStyle } from "../palette.js";
import type { SelectionEvent, ViewState } from "../state.js";
import type { LabelCell, LabelRow, LabelsPayload, SummaryPayload } from "../types.js";

export interface BarsData {
  labels: LabelsPayload;
  summary: SummaryPayload;
}

export class PerformanceBars {
  constructor(
    private readonly root: HTMLElement,
    private readonly dispatch: (event: SelectionEvent) => void,
    private readonly styleFor: (runIndex: number) => RunStyle,
  ) {}

  render(data: BarsData, state: ViewState): void {
    this.root.textContent = "";
    this.root.classList.add("bars");

    const heading = document.createElement("h2");
    heading.textContent = "Performance";
    this.root.append(heading);

    this.root.append(this.summaryStrip(data));

    const matrix = document.createElement("div");
    matrix.className = `bar-matrix mode-${state.barMode} orient-${state.barOrientation}`;
    if (state.barMode === "stacked") {
      this.renderStacked(matrix, data, state);
    } else if (state.barOrientation === "per-label") {
      this.renderGroups(matrix, data, state, "label");
    } else {
      this.renderGroups(matrix, data, state, "run");
    }
    this.root.append(matrix);
  }

  /** Cardinality (with the ground truth's shown alongside) and mean
   * F1/precision/recall per run. */
  private summaryStrip(data: BarsData): HTMLElement {
    const strip = document.createElement("div");
    strip.className = "summary-strip";
    for (const [runIndex, summary] of data.summary.summaries.entries()) {
      const style = this.styleFor(runIndex);
      const card = document.createElement("div");
      card.className = "summary-card";
      card.dataset.run = summary.name;

      const name = document.createElement("h3");
      name.textContent = summary.name;
      const swatch = document.createElement("span");
      swatch.className = `swatch ${style.patternClass}`.trim();
      swatch.style.backgroundColor = style.color;
      name.prepend(swatch);
      card.append(name);

      const cardinality = document.createElement("div");
      cardinality.className = "summary-line";
      cardinality.dataset.measure = "cardinality";
      cardinality.dataset.run = summary.name;
      cardinality.dataset.value = String(summary.cardinality);
      cardinality.textContent =
        `cardinality ${formatCount(summary.cardinality)} ` +
        `(truth ${formatCount(data.summary.ground_truth.cardinality)})`;
      card.append(cardinality);

      card.append(
        this.summaryBar("mean F1", "mean_f1", summary.name, summary.mean_f1, style),
        this.summaryBar("mean precision", "mean_precision", summary.name, summary.mean_precision, style),
        this.summaryBar("mean recall", "mean_recall", summary.name, summary.mean_recall, style),
      );
      strip.append(card);
    }
    return strip;
  }

  private summaryBar(
    caption: string,
    measure: string,
    run: string,
    value: number | null,
    style: RunStyle,
  ): HTMLElement {
    const line = document.createElement("div");
    line.className = "summary-line";
    line.dataset.measure = measure;
    line.dataset.run = run;

    const label = document.createElement("span");
    label.className = "measure-name";
    label.textContent = caption;
    line.append(label);

    if (value === null) {
      const na = document.createElement("span");
      na.className = "undefined-value";
      na.dataset.value = "n/a";
      na.textContent = "n/a";
      line.append(na);
      return line;
    }

    const bar = document.createElement("span");
    bar.className = `bar ${style.patternClass}`.trim();
    bar.style.backgroundColor = style.color;
    bar.style.width = formatPercent(value);
    line.append(bar);

    const text = document.createElement("span");
    text.className = "bar-value";
    text.dataset.value = formatPercent(value);
    text.textContent = formatPercent(value);
    line.append(text);
    return line;
  }

  private renderGroups(
    matrix: HTMLElement,
    data: BarsData,
    state: ViewState,
    axis: "label" | "run",
  ): void {
    if (axis === "label") {
      for (const row of data.labels.labels) {
        const group = document.createElement("div");
        group.className = "bar-group";
        group.dataset.labelId = String(row.id);
        group.append(this.labelHeading(row, state));
        for (const cell of row.metrics) {
          group.append(this.f1Bar(row, cell, data.labels.runs, state, "run"));
        }
        matrix.append(group);
      }
      return;
    }
    for (const runName of data.labels.runs) {
      const group = document.createElement("div");
      group.className = "bar-group";
      group.dataset.run = runName;
      const heading = document.createElement("h3");
      heading.textContent = runName;
      group.append(heading);
      for (const row of data.labels.labels) {
        const cell = row.metrics.find((m) => m.run === runName);
        if (cell) {
          group.append(this.f1Bar(row, cell, data.labels.runs, state, "label"));
        }
      }
      matrix.append(group);
    }
  }

  /** One row per label, every run's bar laid end to end. Row order is the
   * payload order; the app asks the API for the descending-total sort. */
  private renderStacked(matrix: HTMLElement, data: BarsData, state: ViewState): void {
    for (const row of data.labels.labels) {
      const rowBox = document.createElement("div");
      rowBox.className = "stacked-row";
      rowBox.dataset.labelId = String(row.id);
      rowBox.append(this.labelHeading(row, state));
      const track = document.createElement("div");
      track.className = "stacked-track";
      for (const cell of row.metrics) {
        track.append(this.f1Bar(row, cell, data.labels.runs, state, "run"));
      }
      rowBox.append(track);
      matrix.append(rowBox);
    }
  }

  private labelHeading(row: LabelRow, state: ViewState): HTMLElement {
    const heading = document.createElement("h3");
    heading.className = "label-heading";
    heading.dataset.labelId = String(row.id);
    heading.textContent = row.name;
    const freq = document.createElement("span");
    freq.className = "gt-frequency";
    freq.dataset.value = String(row.gt_frequency);
    freq.textContent = ` ×${formatCount(row.gt_frequency)}`;
    heading.append(freq);
    if (state.selectedLabel === row.id) {
      heading.classList.add("selected");
    }
    heading.addEventListener("click", () => {
      this.dispatch({ type: "toggle-label", label: row.id });
    });
    return heading;
  }

  private f1Bar(
    row: LabelRow,
    cell: LabelCell,
    runs: string[],
    state: ViewState,
    captionAxis: "label" | "run",
  ): HTMLElement {
    const line = document.createElement("div");
    line.className = "bar-line";
    line.dataset.labelId = String(row.id);
    line.dataset.run = cell.run;
    if (state.selectedLabel === row.id) {
      line.classList.add("selected");
    }

    const caption = document.createElement("span");
    caption.className = "bar-caption";
    caption.textContent = captionAxis === "run" ? cell.run : row.name;
    line.append(caption);

    const style = this.styleFor(runs.indexOf(cell.run));
    if (cell.f1 === null) {
      const na = document.createElement("span");
      na.className = "undefined-value";
      na.dataset.value = "n/a";
      na.textContent = "n/a";
      line.append(na);
    } else {
      const bar = document.createElement("span");
      bar.className = `bar ${style.patternClass}`.trim();
      bar.style.backgroundColor = style.color;
      bar.style.width = formatPercent(cell.f1);
      line.append(bar);

      const text = document.createElement("span");
      text.className = "bar-value";
      text.dataset.value = formatPercent(cell.f1);
      text.textContent = formatPercent(cell.f1);
      line.append(text);
    }
    line.title =
      `${row.name} / ${cell.run}: F1 ${formatPercent(cell.f1)}, ` +
      `precision ${formatPercent(cell.precision)}, recall ${formatPercent(cell.recall)}`;

    line.addEventListener("click", () => {
      this.dispatch({ type: "toggle-label", label: row.id });
    });
    line.addEventListener("mouseenter", () => {
      this.dispatch({ type: "hover", target: { kind: "bar", label: row.id, run: cell.run } });
    });
    line.addEventListener("mouseleave", () => {
      this.dispatch({ type: "unhover" });
    });
    return line;
  }
}
