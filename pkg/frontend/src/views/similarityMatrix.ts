/** Pairwise mean-Jaccard agreement between every party (ground truth plus
 * each run) as a (K+1)² grid. Each cell shows the percentage and encodes
 * the same value as background luminosity: the larger the agreement, the
 * darker the cell, monotonically. The ground truth heads the first row
 * and column as "Ref". */

import { formatPercent } from "../format.js";
import type { SelectionEvent, ViewState } from "../state.js";
import type { SimilarityPayload } from "../types.js";

const HUE = 212;
const SATURATION = 42;

/** value 0 -> lightness 96 (near white), value 1 -> lightness 36 (dark) */
export function luminosity(value: number): number {
  return 96 - value * 60;
}

export class SimilarityMatrixView {
  constructor(
    private readonly root: HTMLElement,
    private readonly dispatch: (event: SelectionEvent) => void,
  ) {}

  render(matrix: SimilarityPayload, _state: ViewState): void {
    this.root.textContent = "";
    this.root.classList.add("similarity");

    const heading = document.createElement("h2");
    heading.textContent = "Agreement";
    this.root.append(heading);

    const table = document.createElement("table");
    table.className = "similarity-table";

    const displayName = (index: number): string =>
      index === 0 ? "Ref" : (matrix.parties[index] as string);

    const head = document.createElement("tr");
    head.append(document.createElement("th"));
    for (let col = 0; col < matrix.parties.length; col++) {
      const th = document.createElement("th");
      th.textContent = displayName(col);
      head.append(th);
    }
    table.append(head);

    for (let rowIndex = 0; rowIndex < matrix.parties.length; rowIndex++) {
      const tr = document.createElement("tr");
      const th = document.createElement("th");
      th.textContent = displayName(rowIndex);
      tr.append(th);
      const rowValues = matrix.values[rowIndex] as number[];
      for (let col = 0; col < matrix.parties.length; col++) {
        const value = rowValues[col] as number;
        const td = document.createElement("td");
        td.className = "similarity-cell";
        td.dataset.row = displayName(rowIndex);
        td.dataset.col = displayName(col);
        td.dataset.value = formatPercent(value);
        td.textContent = formatPercent(value);
        td.style.backgroundColor = `hsl(${HUE}, ${SATURATION}%, ${luminosity(value)}%)`;
        if (luminosity(value) < 60) {
          td.classList.add("dark-cell");
        }
        td.title = `${displayName(rowIndex)} vs ${displayName(col)}: ${formatPercent(value)}`;
        td.addEventListener("mouseenter", () => {
          this.dispatch({ type: "hover", target: { kind: "cell", label: null, run: null } });
        });
        td.addEventListener("mouseleave", () => {
          this.dispatch({ type: "unhover" });
        });
        tr.append(td);
      }
      table.append(tr);
    }
    this.root.append(table);
  }
}
