/** Column 4, substructure impact on overall topology: two network
 * panels rendering the server-computed layouts of the representative
 * graphs, with instances of the focused graphlet emphasized and the
 * selection rule stated in the caption. */

import { classColor } from "../format";
import type { LayoutResponse, RepresentativesResponse } from "../types";

const SVG_NS = "http://www.w3.org/2000/svg";

export interface ImpactViewOptions {
  size?: number;
}

export class ImpactView {
  readonly root: HTMLElement;
  private readonly size: number;
  private highlightOn = true;
  private lastLayouts: { top: LayoutResponse; bottom: LayoutResponse } | null = null;
  private lastReps: RepresentativesResponse | null = null;

  constructor(container: HTMLElement, options: ImpactViewOptions = {}) {
    this.size = options.size ?? 300;
    this.root = document.createElement("section");
    this.root.className = "column impact-column";
    this.root.innerHTML = `
      <h2>Substructure Impact on Overall Topology</h2>
      <label class="highlight-toggle">
        <input type="checkbox" checked class="toggle" /> highlight graphlet instances
      </label>
      <div class="impact-host"></div>
    `;
    container.appendChild(this.root);
    this.root.querySelector<HTMLInputElement>(".toggle")!.addEventListener("change", (ev) => {
      this.highlightOn = (ev.target as HTMLInputElement).checked;
      if (this.lastLayouts && this.lastReps) {
        this.render(this.lastReps, this.lastLayouts);
      }
    });
  }

  render(
    reps: RepresentativesResponse,
    layouts: { top: LayoutResponse; bottom: LayoutResponse },
  ): void {
    this.lastReps = reps;
    this.lastLayouts = layouts;
    const host = this.root.querySelector(".impact-host")!;
    host.textContent = "";
    host.appendChild(this.panel("top view", reps.top, layouts.top));
    host.appendChild(this.panel("bottom view", reps.bottom, layouts.bottom));
  }

  private panel(
    title: string,
    rep: { graph_id: number; rule: string },
    layout: LayoutResponse,
  ): HTMLElement {
    const wrap = document.createElement("div");
    wrap.className = `impact-panel ${title.replace(" ", "-")}`;
    const caption = document.createElement("p");
    caption.className = "impact-caption";
    caption.textContent = `${title}: graph ${rep.graph_id} (${rep.rule})`;
    wrap.appendChild(caption);

    const svg = document.createElementNS(SVG_NS, "svg");
    svg.setAttribute("width", String(this.size));
    svg.setAttribute("height", String(this.size));
    svg.setAttribute("data-graph-id", String(layout.graph_id));
    const pad = 14;
    const scale = this.size - 2 * pad;
    const px = (v: number) => pad + v * scale;

    const highlightNodes = new Set(this.highlightOn ? layout.highlight?.nodes ?? [] : []);
    const highlightEdges = new Set(
      (this.highlightOn ? layout.highlight?.edges ?? [] : []).map(([u, v]) => `${u}-${v}`),
    );

    for (const [u, v] of layout.edges) {
      const line = document.createElementNS(SVG_NS, "line");
      const a = layout.nodes[u];
      const b = layout.nodes[v];
      line.setAttribute("x1", String(px(a.x)));
      line.setAttribute("y1", String(px(a.y)));
      line.setAttribute("x2", String(px(b.x)));
      line.setAttribute("y2", String(px(b.y)));
      const emphasized = highlightEdges.has(`${u}-${v}`);
      line.setAttribute("stroke", emphasized ? "#d62728" : "#bbb");
      line.setAttribute("stroke-width", emphasized ? "2.5" : "1");
      line.setAttribute("class", emphasized ? "edge highlighted" : "edge");
      svg.appendChild(line);
    }
    for (const node of layout.nodes) {
      const dot = document.createElementNS(SVG_NS, "circle");
      dot.setAttribute("cx", String(px(node.x)));
      dot.setAttribute("cy", String(px(node.y)));
      const emphasized = highlightNodes.has(node.id);
      dot.setAttribute("r", emphasized ? "5" : "3");
      dot.setAttribute("fill", emphasized ? "#d62728" : classColor(layout.label));
      dot.setAttribute("class", emphasized ? "node highlighted" : "node");
      dot.setAttribute("data-node-id", String(node.id));
      svg.appendChild(dot);
    }
    wrap.appendChild(svg);
    return wrap;
  }
}
