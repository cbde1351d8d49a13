/** Run colors: one distinct color per run, assigned by run index so the
 * mapping is stable across views and page loads for a given dataset.
 * Past nine runs the colors repeat with a dash-pattern overlay so repeats
 * stay tellable apart, and the app shows a warning banner. */

export const PALETTE: readonly string[] = [
  "#4269d0",
  "#efb118",
  "#ff725c",
  "#6cc5b0",
  "#3ca951",
  "#ff8ab7",
  "#a463f2",
  "#97bbf5",
  "#9c6b4e",
];

export interface RunStyle {
  color: string;
  /** true when the palette wrapped and a pattern overlay is required */
  patterned: boolean;
  /** CSS class applying the overlay; empty when not patterned */
  patternClass: string;
}

export function runStyle(index: number): RunStyle {
  if (index < 0 || !Number.isInteger(index)) {
    throw new RangeError(`run index must be a non-negative integer, got ${index}`);
  }
  const color = PALETTE[index % PALETTE.length] as string;
  const cycle = Math.floor(index / PALETTE.length);
  return {
    color,
    patterned: cycle > 0,
    patternClass: cycle > 0 ? `pattern-${((cycle - 1) % 3) + 1}` : "",
  };
}

/** More runs than distinct colors: the app must show a warning banner. */
export function paletteOverflow(runCount: number): boolean {
  return runCount > PALETTE.length;
}
