/** Application wiring: the four-column workflow over the HTTP API.
 *
 * Dataflow: dataset -> projection -> selection (slider + lasso +
 * brushes, applied server-side) -> ranking -> focused graphlet ->
 * fidelity + representatives + layouts. All server calls are cancelled
 * when the state they were issued for goes stale. */

import { ApiClient, ApiError } from "./api";
import { decodeState, encodeState, Store } from "./state";
import type { ExplanationMode } from "./types";
import { FidelityView } from "./views/fidelity";
import { ImpactView } from "./views/impact";
import { ProjectionView } from "./views/projection";
import { RankingView } from "./views/ranking";

export interface AppOptions {
  api?: ApiClient;
  syncUrl?: boolean;
}

export class App {
  readonly api: ApiClient;
  readonly store: Store;
  readonly projection: ProjectionView;
  readonly ranking: RankingView;
  readonly fidelity: FidelityView;
  readonly impact: ImpactView;
  private readonly modeSelect: HTMLSelectElement;
  private readonly banner: HTMLElement;
  private controllers: Partial<Record<"ranking" | "fidelity" | "impact", AbortController>> = {};
  private readonly syncUrl: boolean;

  constructor(root: HTMLElement, options: AppOptions = {}) {
    this.api = options.api ?? new ApiClient();
    this.syncUrl = options.syncUrl ?? true;
    this.store = new Store(
      this.syncUrl && typeof location !== "undefined"
        ? decodeState(location.hash)
        : undefined,
    );

    root.innerHTML = `
      <header>
        <h1>Graphlet Explanations</h1>
        <label>explanation mode
          <select class="mode">
            <option value="factual">factual</option>
            <option value="counterfactual">counterfactual</option>
          </select>
        </label>
        <p class="banner error-banner" hidden></p>
      </header>
      <main class="columns"></main>
    `;
    this.banner = root.querySelector(".banner")!;
    this.modeSelect = root.querySelector(".mode")!;
    const columns = root.querySelector<HTMLElement>(".columns")!;

    this.projection = new ProjectionView(columns, {
      onApply: (request) => void this.createSelection(request),
    });
    this.ranking = new RankingView(columns, {
      onFocus: (graphlet) => this.store.update({ focusedGraphlet: graphlet }),
      fetchHistogram: (graphlet) => {
        const state = this.store.get();
        if (!state.selectionId) return Promise.reject(new Error("no selection"));
        return this.api.histogram(state.selectionId, graphlet, 10);
      },
    });
    this.fidelity = new FidelityView(columns);
    this.impact = new ImpactView(columns);

    this.modeSelect.addEventListener("change", () => {
      this.store.update({ mode: this.modeSelect.value as ExplanationMode });
    });

    this.store.subscribe((state, changed) => {
      if (this.syncUrl && typeof history !== "undefined") {
        history.replaceState(null, "", `#${encodeState(state)}`);
      }
      if (changed.includes("mode")) {
        this.modeSelect.value = state.mode;
        this.fidelity.invalidate();
        if (state.selectionId) void this.loadRanking();
      }
      if (changed.includes("selectionId") && state.selectionId) {
        void this.loadRanking();
      }
      if (changed.includes("focusedGraphlet") || changed.includes("mode")) {
        if (state.focusedGraphlet !== null) {
          void this.loadFidelity();
          void this.loadImpact();
        }
      }
    });
  }

  async start(): Promise<void> {
    try {
      const datasets = await this.api.datasets();
      if (datasets.length === 0) {
        this.showError("no datasets available on the server");
        return;
      }
      const state = this.store.get();
      const dataset =
        datasets.find((d) => d.id === state.dataset)?.id ??
        datasets.find((d) => d.active)?.id ??
        datasets[0].id;
      this.store.update({ dataset });
      this.projection.setControls(state.threshold, state.direction);
      const proj = await this.api.projection(dataset);
      this.projection.render(proj.points);
    } catch (err) {
      this.showError(err instanceof ApiError ? err.detail : String(err));
    }
  }

  async createSelection(request: Parameters<ApiClient["createSelection"]>[1]): Promise<void> {
    const state = this.store.get();
    if (!state.dataset) return;
    try {
      const sel = await this.api.createSelection(state.dataset, request);
      this.store.update({
        selectionId: sel.id,
        threshold: request.threshold ?? state.threshold,
        direction: request.direction ?? state.direction,
      });
    } catch (err) {
      this.projection.showError(err instanceof ApiError ? err.detail : String(err));
    }
  }

  async loadRanking(): Promise<void> {
    const state = this.store.get();
    if (!state.selectionId) return;
    const controller = this.renew("ranking");
    try {
      const ranking = await this.api.ranking(state.selectionId, state.mode, controller.signal);
      this.ranking.render(ranking.entries, ranking.mode);
    } catch (err) {
      if (!controller.signal.aborted) this.showError(String(err));
    }
  }

  async loadFidelity(): Promise<void> {
    const state = this.store.get();
    if (!state.selectionId || state.focusedGraphlet === null) return;
    const controller = this.renew("fidelity");
    try {
      const data = await this.api.fidelity(
        state.selectionId,
        state.focusedGraphlet,
        state.mode,
        controller.signal,
      );
      this.fidelity.render(data);
    } catch (err) {
      if (!controller.signal.aborted) this.showError(String(err));
    }
  }

  async loadImpact(): Promise<void> {
    const state = this.store.get();
    if (!state.selectionId || state.focusedGraphlet === null || !state.dataset) return;
    const controller = this.renew("impact");
    try {
      const reps = await this.api.representatives(
        state.selectionId,
        state.focusedGraphlet,
        state.mode,
        controller.signal,
      );
      const [top, bottom] = await Promise.all([
        this.api.layout(reps.top.graph_id, state.focusedGraphlet, state.dataset, controller.signal),
        this.api.layout(
          reps.bottom.graph_id,
          state.focusedGraphlet,
          state.dataset,
          controller.signal,
        ),
      ]);
      this.impact.render(reps, { top, bottom });
    } catch (err) {
      if (!controller.signal.aborted) this.showError(String(err));
    }
  }

  private renew(key: "ranking" | "fidelity" | "impact"): AbortController {
    this.controllers[key]?.abort();
    const controller = new AbortController();
    this.controllers[key] = controller;
    return controller;
  }

  private showError(message: string): void {
    this.banner.hidden = false;
    this.banner.textContent = message;
  }
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  const app = new App(document.getElementById("app")!);
  void app.start();
}
