/** Shared palette for the diagram and panels. */

export const SITE_FILL = "#1f1d1a";
export const SELECTION_STROKE = "#d9480f";
export const CONNECTION_STROKE = "#8a7f76";
export const SYMBOL_FILL = "#2d2a26";
export const FREE_SITE_STROKE = "#b8860b";

/** Deterministic pastel tint for a decoupled-component index. */
export function componentTint(index: number): string {
  const hue = (index * 67) % 360;
  return `hsl(${hue}, 65%, 86%)`;
}
