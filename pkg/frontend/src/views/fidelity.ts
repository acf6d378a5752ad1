/** Column 3, explanatory substructure evaluation.
 *
 * Factual mode: one scatterplot of graphlet frequency (x) against the
 * classification probability (y), Spearman's coefficient in the top
 * right. Counterfactual mode: two class-wise panels of signed
 * confidence changes (triangles up for improved confidence after
 * removal, down for decreased) against frequency, with the sum of
 * absolute L1 distances in the top right. */

import { scaleLinear } from "d3";

import { classColor, setNumber, stat, total as formatTotal } from "../format";
import type { FidelityResponse } from "../types";

const SVG_NS = "http://www.w3.org/2000/svg";

export interface FidelityViewOptions {
  width?: number;
  height?: number;
}

export class FidelityView {
  readonly root: HTMLElement;
  private readonly width: number;
  private readonly height: number;
  private stale = true;

  constructor(container: HTMLElement, options: FidelityViewOptions = {}) {
    this.width = options.width ?? 380;
    this.height = options.height ?? 260;
    this.root = document.createElement("section");
    this.root.className = "column fidelity-column";
    this.root.innerHTML = `
      <h2>Explanatory Substructure Evaluation</h2>
      <div class="fidelity-host"><p class="placeholder">Click a graphlet card to evaluate it.</p></div>
    `;
    container.appendChild(this.root);
  }

  /** A mode or selection change invalidates the panel until re-rendered. */
  invalidate(): void {
    this.stale = true;
    const host = this.root.querySelector(".fidelity-host")!;
    host.innerHTML = `<p class="placeholder stale">Re-fetching for the new mode…</p>`;
  }

  isStale(): boolean {
    return this.stale;
  }

  render(data: FidelityResponse): void {
    this.stale = false;
    const host = this.root.querySelector(".fidelity-host")!;
    host.textContent = "";
    if (data.mode === "factual") {
      host.appendChild(this.factualPlot(data));
    } else {
      for (const label of [0, 1] as const) {
        host.appendChild(this.counterfactualPlot(data, label));
      }
    }
  }

  private statBadge(value: number, text: string, kind: string): HTMLElement {
    const badge = document.createElement("div");
    badge.className = `stat-badge ${kind}`;
    setNumber(badge, value, text);
    return badge;
  }

  private factualPlot(data: Extract<FidelityResponse, { mode: "factual" }>): HTMLElement {
    const wrap = document.createElement("div");
    wrap.className = "fidelity-plot factual";
    const caption = document.createElement("p");
    caption.textContent = `graphlet ${data.graphlet}: frequency vs classification probability`;
    wrap.appendChild(caption);
    wrap.appendChild(
      this.statBadge(data.rho, data.degenerate ? "n/a" : stat(data.rho), "rho"),
    );

    const svg = document.createElementNS(SVG_NS, "svg");
    svg.setAttribute("width", String(this.width));
    svg.setAttribute("height", String(this.height));
    const xs = data.points.map((p) => p.frequency);
    const sx = scaleLinear()
      .domain([0, Math.max(1e-12, ...xs)])
      .range([10, this.width - 10]);
    const sy = scaleLinear().domain([0, 1]).range([this.height - 10, 10]);
    for (const p of data.points) {
      const dot = document.createElementNS(SVG_NS, "circle");
      dot.setAttribute("cx", String(sx(p.frequency)));
      dot.setAttribute("cy", String(sy(p.class_prob)));
      dot.setAttribute("r", "3");
      dot.setAttribute("fill", classColor(p.label));
      dot.setAttribute("data-graph-id", String(p.graph_id));
      dot.setAttribute("data-exact", JSON.stringify(p.class_prob));
      svg.appendChild(dot);
    }
    wrap.appendChild(svg);
    return wrap;
  }

  private counterfactualPlot(
    data: Extract<FidelityResponse, { mode: "counterfactual" }>,
    label: 0 | 1,
  ): HTMLElement {
    const wrap = document.createElement("div");
    wrap.className = `fidelity-plot counterfactual class-${label}`;
    const caption = document.createElement("p");
    caption.textContent = `class ${label}: confidence change after removing graphlet ${data.graphlet}`;
    wrap.appendChild(caption);
    if (label === 0) {
      wrap.appendChild(this.statBadge(data.total, formatTotal(data.total), "total"));
    }

    const points = data.points.filter((p) => p.label === label);
    const svg = document.createElementNS(SVG_NS, "svg");
    svg.setAttribute("width", String(this.width));
    svg.setAttribute("height", String(this.height / 2));
    const xs = points.map((p) => p.frequency);
    const deltas = points.map((p) => Math.abs(p.delta));
    const sx = scaleLinear()
      .domain([0, Math.max(1e-12, ...xs)])
      .range([10, this.width - 10]);
    const maxDelta = Math.max(1e-12, ...deltas);
    const sy = scaleLinear()
      .domain([-maxDelta, maxDelta])
      .range([this.height / 2 - 10, 10]);

    const zero = document.createElementNS(SVG_NS, "line");
    zero.setAttribute("x1", "10");
    zero.setAttribute("x2", String(this.width - 10));
    zero.setAttribute("y1", String(sy(0)));
    zero.setAttribute("y2", String(sy(0)));
    zero.setAttribute("class", "zero-line");
    zero.setAttribute("stroke", "#999");
    svg.appendChild(zero);

    for (const p of points) {
      const x = sx(p.frequency);
      const y = sy(p.delta);
      const tri = document.createElementNS(SVG_NS, "path");
      const size = 4;
      // Triangle points up for improved confidence, down for decreased.
      const d =
        p.delta >= 0
          ? `M ${x} ${y - size} L ${x - size} ${y + size} L ${x + size} ${y + size} Z`
          : `M ${x} ${y + size} L ${x - size} ${y - size} L ${x + size} ${y - size} Z`;
      tri.setAttribute("d", d);
      tri.setAttribute("fill", classColor(p.label));
      tri.setAttribute("class", p.delta >= 0 ? "delta-up" : "delta-down");
      tri.setAttribute("data-graph-id", String(p.graph_id));
      tri.setAttribute("data-exact", JSON.stringify(p.delta));
      tri.setAttribute("data-l1", JSON.stringify(p.l1));
      svg.appendChild(tri);
    }
    wrap.appendChild(svg);
    return wrap;
  }
}
