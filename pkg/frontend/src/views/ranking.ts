/** Column 2, substructure explanatory ranking: the 29 graphlet cards in
 * server order, each with a class-wise frequency histogram. Cards are
 * virtualized (only the scrolled window is materialized). Hovering a
 * histogram bin raises the opacity of every same-class bin across all
 * cards; clicking a card focuses its graphlet. */

import { classColor, setNumber, stat } from "../format";
import type { ExplanationMode, HistogramResponse, RankingEntry } from "../types";

export interface RankingViewOptions {
  cardHeight?: number;
  viewportHeight?: number;
  onFocus(graphlet: number): void;
  fetchHistogram(graphlet: number): Promise<HistogramResponse>;
}

export class RankingView {
  readonly root: HTMLElement;
  private readonly options: Required<RankingViewOptions>;
  private entries: RankingEntry[] = [];
  private mode: ExplanationMode = "factual";
  private viewport!: HTMLElement;
  private spacer!: HTMLElement;
  private rendered = new Map<number, HTMLElement>();
  private highlightedClass: 0 | 1 | null = null;

  constructor(container: HTMLElement, options: RankingViewOptions) {
    this.options = {
      cardHeight: options.cardHeight ?? 120,
      viewportHeight: options.viewportHeight ?? 560,
      onFocus: options.onFocus,
      fetchHistogram: options.fetchHistogram,
    };
    this.root = document.createElement("section");
    this.root.className = "column ranking-column";
    this.root.innerHTML = `
      <h2>Substructure Explanatory Ranking</h2>
      <div class="ranking-viewport" style="overflow-y: auto; position: relative;">
        <div class="ranking-spacer" style="position: relative;"></div>
      </div>
    `;
    container.appendChild(this.root);
    this.viewport = this.root.querySelector(".ranking-viewport")!;
    this.viewport.style.height = `${this.options.viewportHeight}px`;
    this.spacer = this.root.querySelector(".ranking-spacer")!;
    this.viewport.addEventListener("scroll", () => this.renderWindow());
  }

  render(entries: RankingEntry[], mode: ExplanationMode): void {
    this.entries = entries;
    this.mode = mode;
    this.rendered.clear();
    this.spacer.textContent = "";
    this.spacer.style.height = `${entries.length * this.options.cardHeight}px`;
    this.viewport.scrollTop = 0;
    this.renderWindow();
  }

  /** Graphlet indices in display order (server order, verbatim). */
  order(): number[] {
    return this.entries.map((e) => e.graphlet);
  }

  /** Cards currently materialized, in document order. */
  renderedCards(): HTMLElement[] {
    return Array.from(this.spacer.querySelectorAll<HTMLElement>(".graphlet-card"));
  }

  highlightClass(label: 0 | 1 | null): void {
    this.highlightedClass = label;
    for (const card of this.renderedCards()) {
      card.querySelectorAll<HTMLElement>(".hist-bar").forEach((bar) => {
        const barLabel = Number(bar.dataset.label);
        bar.style.opacity = label === null ? "0.75" : barLabel === label ? "1" : "0.25";
      });
    }
  }

  private renderWindow(): void {
    const top = this.viewport.scrollTop;
    const height = this.viewport.clientHeight || this.options.viewportHeight;
    const first = Math.max(0, Math.floor(top / this.options.cardHeight) - 2);
    const last = Math.min(
      this.entries.length - 1,
      Math.ceil((top + height) / this.options.cardHeight) + 2,
    );
    for (const [rank, card] of [...this.rendered]) {
      if (rank < first || rank > last) {
        card.remove();
        this.rendered.delete(rank);
      }
    }
    for (let rank = first; rank <= last; rank++) {
      if (!this.rendered.has(rank)) {
        const card = this.buildCard(rank, this.entries[rank]);
        this.rendered.set(rank, card);
        this.spacer.appendChild(card);
      }
    }
  }

  private buildCard(rank: number, entry: RankingEntry): HTMLElement {
    const card = document.createElement("div");
    card.className = "graphlet-card";
    card.style.position = "absolute";
    card.style.top = `${rank * this.options.cardHeight}px`;
    card.style.height = `${this.options.cardHeight - 8}px`;
    card.dataset.graphlet = String(entry.graphlet);
    card.dataset.rank = String(rank);

    const header = document.createElement("div");
    header.className = "card-header";
    const title = document.createElement("span");
    title.textContent = `#${rank + 1} graphlet ${entry.graphlet} (${entry.name})`;
    header.appendChild(title);
    const score = document.createElement("span");
    score.className = "card-score";
    if (this.mode === "factual" && "rho" in entry) {
      setNumber(score, entry.rho, entry.degenerate ? "n/a" : stat(entry.rho));
      score.title = "Spearman correlation between frequency and classification probability";
    } else if ("total" in entry) {
      setNumber(score, entry.total);
      score.title = "sum of absolute L1 distances between the two inference runs";
    }
    header.appendChild(score);
    card.appendChild(header);

    const hist = document.createElement("div");
    hist.className = "card-histogram";
    hist.textContent = "…";
    card.appendChild(hist);
    this.options
      .fetchHistogram(entry.graphlet)
      .then((h) => this.renderHistogram(hist, h))
      .catch(() => {
        hist.textContent = "histogram unavailable";
      });

    card.addEventListener("click", () => this.options.onFocus(entry.graphlet));
    return card;
  }

  private renderHistogram(host: HTMLElement, data: HistogramResponse): void {
    host.textContent = "";
    const maxCount = Math.max(1, ...data.counts[0], ...data.counts[1]);
    for (const label of [0, 1] as const) {
      const row = document.createElement("div");
      row.className = `hist-row class-${label}`;
      data.counts[label].forEach((count, bin) => {
        const bar = document.createElement("div");
        bar.className = "hist-bar";
        bar.dataset.label = String(label);
        bar.dataset.bin = String(bin);
        bar.dataset.exact = String(count);
        bar.style.height = `${(count / maxCount) * 28}px`;
        bar.style.background = classColor(label);
        bar.style.opacity =
          this.highlightedClass === null ? "0.75" : this.highlightedClass === label ? "1" : "0.25";
        bar.title = `class ${label}, bin ${bin}: ${count}`;
        bar.addEventListener("mouseenter", () => this.highlightClass(label));
        bar.addEventListener("mouseleave", () => this.highlightClass(null));
        row.appendChild(bar);
      });
      host.appendChild(row);
    }
  }
}
