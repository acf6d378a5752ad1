/** Column 1, graph group selection: confidence slider + direction,
 * the frequency-PC1 vs embedding-PC1 scatterplot with lasso selection,
 * and per-class confidence histograms with range brushes. */

import { scaleLinear } from "d3";

import { classColor } from "../format";
import { convexHull, padPolygon, pointInPolygon, type Point } from "../lasso";
import type { ProjectionPoint, SelectionRequest } from "../types";

export interface ProjectionViewOptions {
  width?: number;
  height?: number;
  histogramBins?: number;
  onApply(request: SelectionRequest): void;
}

interface Brush {
  lo: number;
  hi: number;
}

const SVG_NS = "http://www.w3.org/2000/svg";

export class ProjectionView {
  readonly root: HTMLElement;
  private readonly options: Required<Omit<ProjectionViewOptions, "onApply">> &
    Pick<ProjectionViewOptions, "onApply">;
  private points: ProjectionPoint[] = [];
  private threshold = 0.5;
  private direction: "higher" | "lower" = "higher";
  private polygon: Point[] | null = null;
  private brushes: Partial<Record<0 | 1, Brush>> = {};

  private svg!: SVGSVGElement;
  private slider!: HTMLInputElement;
  private sliderValue!: HTMLElement;
  private directionSelect!: HTMLSelectElement;
  private warning!: HTMLElement;

  constructor(container: HTMLElement, options: ProjectionViewOptions) {
    this.options = {
      width: options.width ?? 420,
      height: options.height ?? 420,
      histogramBins: options.histogramBins ?? 20,
      onApply: options.onApply,
    };
    this.root = document.createElement("section");
    this.root.className = "column projection-column";
    this.root.innerHTML = `
      <h2>Graph Group Selection</h2>
      <div class="controls">
        <label>confidence
          <select class="direction">
            <option value="higher">higher than</option>
            <option value="lower">lower than</option>
          </select>
          <input type="range" class="threshold" min="0" max="1" step="0.01" value="0.5" />
          <span class="threshold-value">0.50</span>
        </label>
        <button class="select-all">Select all</button>
        <button class="apply">Generate explanations</button>
      </div>
      <div class="scatter-host"></div>
      <div class="brush-host"></div>
      <p class="warning" hidden></p>
    `;
    container.appendChild(this.root);
    this.slider = this.root.querySelector(".threshold")!;
    this.sliderValue = this.root.querySelector(".threshold-value")!;
    this.directionSelect = this.root.querySelector(".direction")!;
    this.warning = this.root.querySelector(".warning")!;
    this.slider.addEventListener("input", () => {
      this.threshold = Number(this.slider.value);
      this.sliderValue.textContent = this.threshold.toFixed(2);
      this.redraw();
    });
    this.directionSelect.addEventListener("change", () => {
      this.direction = this.directionSelect.value as "higher" | "lower";
      this.redraw();
    });
    this.root.querySelector(".select-all")!.addEventListener("click", () => this.selectAll());
    this.root.querySelector(".apply")!.addEventListener("click", () => this.apply());
  }

  setControls(threshold: number, direction: "higher" | "lower"): void {
    this.threshold = threshold;
    this.direction = direction;
    this.slider.value = String(threshold);
    this.sliderValue.textContent = threshold.toFixed(2);
    this.directionSelect.value = direction;
  }

  render(points: ProjectionPoint[]): void {
    this.points = points;
    this.redraw();
  }

  /** Graphs passing the slider stage; the lasso applies on top of these. */
  visiblePoints(): ProjectionPoint[] {
    return this.points.filter((p) =>
      this.direction === "higher" ? p.confidence > this.threshold : p.confidence < this.threshold,
    );
  }

  /** Local preview of the current selection stages (server is authoritative). */
  previewSelection(): ProjectionPoint[] {
    let kept = this.visiblePoints();
    if (this.polygon) {
      const poly = this.polygon;
      kept = kept.filter((p) => pointInPolygon(p.x, p.y, poly));
    }
    const brushes = this.brushes;
    if (brushes[0] || brushes[1]) {
      kept = kept.filter((p) => {
        const b = brushes[p.label];
        return b !== undefined && b.lo <= p.confidence && p.confidence <= b.hi;
      });
    }
    return kept;
  }

  setLasso(polygon: Point[] | null): void {
    this.polygon = polygon;
    this.redraw();
  }

  setBrush(label: 0 | 1, range: Brush | null): void {
    if (range === null) {
      delete this.brushes[label];
    } else {
      this.brushes[label] = range;
    }
    this.redraw();
  }

  /** Lasso the convex hull of every visible point. */
  selectAll(): void {
    const pts: Point[] = this.visiblePoints().map((p) => [p.x, p.y]);
    if (pts.length === 0) return;
    const hull = convexHull(pts);
    this.setLasso(hull.length >= 3 ? padPolygon(hull, 1e-6) : null);
  }

  apply(): void {
    const preview = this.previewSelection();
    if (preview.length === 0) {
      this.warning.hidden = false;
      this.warning.textContent = "Selection is empty; relax the filters.";
      return;
    }
    this.warning.hidden = true;
    const request: SelectionRequest = {
      threshold: this.threshold,
      direction: this.direction,
    };
    if (this.polygon) request.polygon = this.polygon.map(([x, y]) => [x, y]);
    const brushEntries = Object.entries(this.brushes);
    if (brushEntries.length > 0) {
      request.brushes = Object.fromEntries(
        brushEntries.map(([label, b]) => [label, [b!.lo, b!.hi] as [number, number]]),
      );
    }
    this.options.onApply(request);
  }

  showError(message: string): void {
    this.warning.hidden = false;
    this.warning.textContent = message;
  }

  private redraw(): void {
    const host = this.root.querySelector(".scatter-host")!;
    host.textContent = "";
    const { width, height } = this.options;
    this.svg = document.createElementNS(SVG_NS, "svg");
    this.svg.setAttribute("width", String(width));
    this.svg.setAttribute("height", String(height));
    this.svg.setAttribute("class", "projection-plot");
    host.appendChild(this.svg);
    if (this.points.length === 0) return;

    const visible = this.visiblePoints();
    const xs = this.points.map((p) => p.x);
    const ys = this.points.map((p) => p.y);
    const pad = 12;
    const sx = scaleLinear()
      .domain([Math.min(...xs), Math.max(...xs)])
      .range([pad, width - pad]);
    const sy = scaleLinear()
      .domain([Math.min(...ys), Math.max(...ys)])
      .range([height - pad, pad]);

    const inPreview = new Set(this.previewSelection().map((p) => p.graph_id));
    for (const p of visible) {
      const dot = document.createElementNS(SVG_NS, "circle");
      dot.setAttribute("cx", String(sx(p.x)));
      dot.setAttribute("cy", String(sy(p.y)));
      dot.setAttribute("r", "3");
      dot.setAttribute("fill", classColor(p.label));
      dot.setAttribute("data-graph-id", String(p.graph_id));
      dot.setAttribute("class", inPreview.has(p.graph_id) ? "dot selected" : "dot");
      if (inPreview.has(p.graph_id)) {
        dot.setAttribute("stroke", classColor(p.label));
        dot.setAttribute("stroke-width", "2");
        dot.setAttribute("fill-opacity", "0.9");
      } else {
        dot.setAttribute("fill-opacity", "0.35");
      }
      this.svg.appendChild(dot);
    }
    if (this.polygon) {
      const path = document.createElementNS(SVG_NS, "polygon");
      path.setAttribute(
        "points",
        this.polygon.map(([x, y]) => `${sx(x)},${sy(y)}`).join(" "),
      );
      path.setAttribute("class", "lasso");
      path.setAttribute("fill", "none");
      path.setAttribute("stroke", "#555");
      path.setAttribute("stroke-dasharray", "4 3");
      this.svg.appendChild(path);
    }
    this.renderBrushHistograms(visible);
  }

  private renderBrushHistograms(visible: ProjectionPoint[]): void {
    const host = this.root.querySelector(".brush-host")!;
    host.textContent = "";
    const bins = this.options.histogramBins;
    for (const label of [0, 1] as const) {
      const wrap = document.createElement("div");
      wrap.className = `brush-histogram class-${label}`;
      const title = document.createElement("span");
      title.textContent = `class ${label} confidence`;
      wrap.appendChild(title);
      const counts = new Array(bins).fill(0);
      for (const p of visible) {
        if (p.label !== label) continue;
        const bin = Math.min(bins - 1, Math.floor(p.confidence * bins));
        counts[bin] += 1;
      }
      const maxCount = Math.max(1, ...counts);
      const bar = document.createElement("div");
      bar.className = "bars";
      counts.forEach((c, i) => {
        const cell = document.createElement("div");
        cell.className = "bar";
        cell.style.height = `${(c / maxCount) * 40}px`;
        cell.style.background = classColor(label);
        cell.dataset.bin = String(i);
        cell.dataset.count = String(c);
        bar.appendChild(cell);
      });
      wrap.appendChild(bar);
      host.appendChild(wrap);
    }
  }
}
