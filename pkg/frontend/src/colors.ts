/** Stable group → color mapping: a hash-derived palette, no state needed. */

const FNV_OFFSET = 0x811c9dc5;
const FNV_PRIME = 0x01000193;

export function fnv1a32(text: string): number {
  let hash = FNV_OFFSET;
  for (let i = 0; i < text.length; i++) {
    hash ^= text.charCodeAt(i);
    hash = Math.imul(hash, FNV_PRIME) >>> 0;
  }
  return hash >>> 0;
}

/**
 * Deterministic color for a group name. The golden-angle hue step spreads
 * hash-adjacent groups far apart on the wheel.
 */
export function groupColor(group: string): string {
  const hash = fnv1a32(group);
  const hue = (hash * 137.50776405003785) % 360;
  const sat = 62 + (hash % 3) * 8; // 62, 70 or 78%
  return `hsl(${hue.toFixed(1)}, ${sat}%, 52%)`;
}

export const HIGHLIGHT_COLOR = "hsl(48, 100%, 55%)";
export const CONTOUR_COLOR = "rgba(90, 110, 140, 0.35)";
export const LABEL_COLOR = "#1d2530";
