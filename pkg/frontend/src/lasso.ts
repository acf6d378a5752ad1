/** Lasso geometry helpers: the polygon the analyst draws is sent to the
 * server, which owns membership; the client-side test here only powers
 * the live preview while dragging. */

export type Point = [number, number];

export function pointInPolygon(x: number, y: number, polygon: Point[]): boolean {
  let inside = false;
  const n = polygon.length;
  for (let i = 0, j = n - 1; i < n; j = i++) {
    const [x1, y1] = polygon[i];
    const [x2, y2] = polygon[j];
    const cross = (x2 - x1) * (y - y1) - (y2 - y1) * (x - x1);
    if (Math.abs(cross) < 1e-12) {
      if (
        Math.min(x1, x2) - 1e-12 <= x &&
        x <= Math.max(x1, x2) + 1e-12 &&
        Math.min(y1, y2) - 1e-12 <= y &&
        y <= Math.max(y1, y2) + 1e-12
      ) {
        return true;
      }
    }
    if (y1 > y !== y2 > y) {
      const xAt = x1 + ((y - y1) * (x2 - x1)) / (y2 - y1);
      if (xAt > x) inside = !inside;
    }
  }
  return inside;
}

/** Convex hull (Andrew's monotone chain); used by "select everything"
 * and by the contract tests that lasso the full hull. */
export function convexHull(points: Point[]): Point[] {
  const pts = [...points].sort((a, b) => a[0] - b[0] || a[1] - b[1]);
  if (pts.length <= 2) return pts;
  const cross = (o: Point, a: Point, b: Point) =>
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
  const lower: Point[] = [];
  for (const p of pts) {
    while (lower.length >= 2 && cross(lower[lower.length - 2], lower[lower.length - 1], p) <= 0) {
      lower.pop();
    }
    lower.push(p);
  }
  const upper: Point[] = [];
  for (const p of [...pts].reverse()) {
    while (upper.length >= 2 && cross(upper[upper.length - 2], upper[upper.length - 1], p) <= 0) {
      upper.pop();
    }
    upper.push(p);
  }
  return [...lower.slice(0, -1), ...upper.slice(0, -1)];
}

/** Slightly inflate a hull so boundary points stay strictly inside. */
export function padPolygon(polygon: Point[], pad: number): Point[] {
  const cx = polygon.reduce((s, p) => s + p[0], 0) / polygon.length;
  const cy = polygon.reduce((s, p) => s + p[1], 0) / polygon.length;
  return polygon.map(([x, y]) => {
    const dx = x - cx;
    const dy = y - cy;
    const norm = Math.hypot(dx, dy) || 1;
    return [x + (dx / norm) * pad, y + (dy / norm) * pad];
  });
}
