/** The only numeric transform the UI applies: fraction -> percent string.
 * Every other number is displayed exactly as the API sent it. */

export function formatPercent(value: number | null | undefined, digits = 1): string {
  if (value === null || value === undefined) {
    return "n/a";
  }
  return (value * 100).toFixed(digits) + "%";
}

/** Counts and other integers pass through untouched. */
export function formatCount(value: number): string {
  return String(value);
}
