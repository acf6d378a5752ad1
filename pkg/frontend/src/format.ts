/** Number rendering that keeps the server's values verifiable.
 *
 * The UI computes no statistics: any element showing a server number
 * carries the exact JSON serialization in data-exact, while the visible
 * text is a fixed-precision rendering of that same value. Tests compare
 * data-exact byte-for-byte against the API payload. */

export function exact(value: number): string {
  return JSON.stringify(value);
}

/** Visible text for correlation and delta values (4 decimals). */
export function stat(value: number): string {
  return value.toFixed(4);
}

/** Visible text for sums such as the counterfactual total. */
export function total(value: number): string {
  return value.toFixed(4);
}

export function setNumber(el: HTMLElement, value: number, text?: string): void {
  el.dataset.exact = exact(value);
  el.textContent = text ?? stat(value);
}

export const CLASS_COLORS = ["#3a7bd5", "#e8638c"] as const;

export function classColor(label: 0 | 1): string {
  return CLASS_COLORS[label];
}
