/** Precision over recall, one small circle per (label, run) plus one
 * opaque centroid per run at its mean point. A point exists only when both
 * coordinates are defined. Visual circles are nudged by a deterministic
 * jitter so coincident points stay visible; the invisible hit circles that
 * take hover/click sit at the exact unjittered coordinates. */

import { formatPercent } from "../format.js";
import { jitterOffset } from "../jitter.js";
import type { RunStyle } from "../palette.js";
import type { SelectionEvent, ViewState } from "../state.js";
import type { LabelsPayload, SummaryPayload } from "../types.js";

export interface ScatterData {
  labels: LabelsPayload;
  summary: SummaryPayload;
}

const SIZE = 420;
const MARGIN = 36;
const SPAN = SIZE - 2 * MARGIN;

const SVG_NS = "http://www.w3.org/2000/svg";

/** recall (x) and precision (y) both live in [0, 1] */
function scaleX(recall: number): number {
  return MARGIN + recall * SPAN;
}

function scaleY(precision: number): number {
  return SIZE - MARGIN - precision * SPAN;
}

export class PrScatterplot {
  constructor(
    private readonly root: HTMLElement,
    private readonly dispatch: (event: SelectionEvent) => void,
    private readonly styleFor: (runIndex: number) => RunStyle,
  ) {}

  render(data: ScatterData, state: ViewState): void {
    this.root.textContent = "";
    this.root.classList.add("scatter");

    const heading = document.createElement("h2");
    heading.textContent = "Precision / Recall";
    this.root.append(heading);

    const svg = document.createElementNS(SVG_NS, "svg");
    svg.setAttribute("viewBox", `0 0 ${SIZE} ${SIZE}`);
    svg.setAttribute("width", String(SIZE));
    svg.setAttribute("height", String(SIZE));
    svg.append(this.axes());

    const hoveredRun =
      state.hovered && state.hovered.kind === "point" ? state.hovered.run : null;

    // label points first, centroids on top
    const hitLayer = document.createElementNS(SVG_NS, "g");
    for (const row of data.labels.labels) {
      for (const cell of row.metrics) {
        if (cell.precision === null || cell.recall === null) {
          continue;
        }
        const runIndex = data.labels.runs.indexOf(cell.run);
        const style = this.styleFor(runIndex);
        const exactX = scaleX(cell.recall);
        const exactY = scaleY(cell.precision);
        const nudge = jitterOffset(row.id, cell.run, SPAN);

        const dot = document.createElementNS(SVG_NS, "circle");
        dot.setAttribute("class", "scatter-point");
        dot.setAttribute("cx", String(exactX + nudge.dx));
        dot.setAttribute("cy", String(exactY + nudge.dy));
        dot.setAttribute("r", state.selectedLabel === row.id ? "7" : "4");
        dot.setAttribute("fill", style.color);
        dot.setAttribute("fill-opacity", "0.55");
        dot.setAttribute("data-label-id", String(row.id));
        dot.setAttribute("data-run", cell.run);
        if (state.selectedLabel === row.id) {
          dot.classList.add("selected");
        }
        if (hoveredRun !== null && hoveredRun !== cell.run) {
          dot.classList.add("hidden-peer");
          dot.setAttribute("fill-opacity", "0");
        }
        svg.append(dot);

        // hit target: exact coordinates, generous radius, invisible
        const hit = document.createElementNS(SVG_NS, "circle");
        hit.setAttribute("class", "scatter-hit");
        hit.setAttribute("cx", String(exactX));
        hit.setAttribute("cy", String(exactY));
        hit.setAttribute("r", "9");
        hit.setAttribute("fill", "transparent");
        hit.setAttribute("data-label-id", String(row.id));
        hit.setAttribute("data-run", cell.run);
        hit.setAttribute("data-value-precision", formatPercent(cell.precision));
        hit.setAttribute("data-value-recall", formatPercent(cell.recall));
        const title = document.createElementNS(SVG_NS, "title");
        title.textContent =
          `${row.name} / ${cell.run}: precision ${formatPercent(cell.precision)}, ` +
          `recall ${formatPercent(cell.recall)}`;
        hit.append(title);
        hit.addEventListener("click", () => {
          this.dispatch({ type: "toggle-label", label: row.id });
        });
        hit.addEventListener("mouseenter", () => {
          this.dispatch({
            type: "hover",
            target: { kind: "point", label: row.id, run: cell.run },
          });
        });
        hit.addEventListener("mouseleave", () => {
          this.dispatch({ type: "unhover" });
        });
        hitLayer.append(hit);
      }
    }

    for (const [runIndex, summary] of data.summary.summaries.entries()) {
      if (summary.mean_precision === null || summary.mean_recall === null) {
        continue;
      }
      const style = this.styleFor(runIndex);
      const centroid = document.createElementNS(SVG_NS, "circle");
      centroid.setAttribute("class", "scatter-centroid");
      centroid.setAttribute("cx", String(scaleX(summary.mean_recall)));
      centroid.setAttribute("cy", String(scaleY(summary.mean_precision)));
      centroid.setAttribute("r", "8");
      centroid.setAttribute("fill", style.color);
      centroid.setAttribute("data-run", summary.name);
      centroid.setAttribute("data-value-precision", formatPercent(summary.mean_precision));
      centroid.setAttribute("data-value-recall", formatPercent(summary.mean_recall));
      if (hoveredRun !== null && hoveredRun !== summary.name) {
        centroid.setAttribute("fill-opacity", "0.15");
      }
      const title = document.createElementNS(SVG_NS, "title");
      title.textContent =
        `${summary.name} mean: precision ${formatPercent(summary.mean_precision)}, ` +
        `recall ${formatPercent(summary.mean_recall)}`;
      centroid.append(title);
      svg.append(centroid);
    }

    svg.append(hitLayer);
    this.root.append(svg);
  }

  private axes(): SVGGElement {
    const group = document.createElementNS(SVG_NS, "g");
    group.setAttribute("class", "scatter-axes");
    const frame = document.createElementNS(SVG_NS, "rect");
    frame.setAttribute("x", String(MARGIN));
    frame.setAttribute("y", String(MARGIN));
    frame.setAttribute("width", String(SPAN));
    frame.setAttribute("height", String(SPAN));
    frame.setAttribute("fill", "none");
    frame.setAttribute("stroke", "#999");
    group.append(frame);

    const xLabel = document.createElementNS(SVG_NS, "text");
    xLabel.setAttribute("x", String(SIZE / 2));
    xLabel.setAttribute("y", String(SIZE - 8));
    xLabel.setAttribute("text-anchor", "middle");
    xLabel.textContent = "Recall";
    group.append(xLabel);

    const yLabel = document.createElementNS(SVG_NS, "text");
    yLabel.setAttribute("x", "12");
    yLabel.setAttribute("y", String(SIZE / 2));
    yLabel.setAttribute("text-anchor", "middle");
    yLabel.setAttribute("transform", `rotate(-90 12 ${SIZE / 2})`);
    yLabel.textContent = "Precision";
    group.append(yLabel);
    return group;
  }
}

export { scaleX, scaleY, SPAN };
