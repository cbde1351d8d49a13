/** Deterministic point jitter for the scatterplot. Coincident (label, run)
 * points are nudged apart so they stay visible, but the nudge is a pure
 * function of the identity, never random: reloads, screenshots, and tests
 * all see the same pixels. Displacement is capped at 0.5% of the axis
 * span per coordinate. Hit-testing must use the unjittered position. */

export const MAX_JITTER_FRACTION = 0.005;

/** FNV-1a, 32 bit. Good enough spread for a visual nudge. */
export function hashString(text: string): number {
  let hash = 0x811c9dc5;
  for (let i = 0; i < text.length; i++) {
    hash ^= text.charCodeAt(i);
    hash = Math.imul(hash, 0x01000193);
  }
  return hash >>> 0;
}

export interface JitterOffset {
  dx: number;
  dy: number;
}

/** Offsets in axis units for one (label, run) point. |dx|,|dy| are at most
 * MAX_JITTER_FRACTION * axisSpan. */
export function jitterOffset(labelId: number, runName: string, axisSpan: number): JitterOffset {
  const hash = hashString(`${labelId}:${runName}`);
  // split the hash into two independent 16-bit lanes, map each to [-1, 1]
  const lowLane = (hash & 0xffff) / 0xffff;
  const highLane = ((hash >>> 16) & 0xffff) / 0xffff;
  const scale = MAX_JITTER_FRACTION * axisSpan;
  return {
    dx: (lowLane * 2 - 1) * scale,
    dy: (highLane * 2 - 1) * scale,
  };
}
