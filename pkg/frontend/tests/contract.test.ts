/** Contract with the server for a fixed BA-House session: every number
 * the UI displays is byte-equal to the API response it came from, the
 * full-hull lasso reproduces the all-graphs ranking, and a mode switch
 * re-sorts the cards into the server's order. */

import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import { App } from "../src/main";
import {
  fixture,
  flushMicrotasks,
  installFixtureFetch,
  META,
  type RecordedRequest,
} from "./helpers";

let log: RecordedRequest[];
let app: App;

async function bootApp(): Promise<App> {
  const root = document.createElement("div");
  document.body.appendChild(root);
  const instance = new App(root, { syncUrl: false });
  await instance.start();
  await flushMicrotasks();
  return instance;
}

async function applyDefaultSelection(instance: App): Promise<void> {
  instance.projection.apply();
  await flushMicrotasks(30);
}

beforeEach(async () => {
  document.body.innerHTML = "";
  log = installFixtureFetch();
  app = await bootApp();
});

afterEach(() => {
  vi.unstubAllGlobals();
});

describe("ranking order and scores", () => {
  it("renders cards in the server's order with byte-equal scores", async () => {
    await applyDefaultSelection(app);
    const entries = fixture("ranking_factual").entries;
    expect(app.ranking.order()).toEqual(entries.map((e: any) => e.graphlet));
    for (const card of app.ranking.renderedCards()) {
      const rank = Number(card.dataset.rank);
      const entry = entries[rank];
      expect(card.dataset.graphlet).toBe(String(entry.graphlet));
      const score = card.querySelector<HTMLElement>(".card-score")!;
      expect(score.dataset.exact).toBe(JSON.stringify(entry.rho));
    }
  });

  it("virtualizes: only the scrolled window is materialized", async () => {
    await applyDefaultSelection(app);
    const cards = app.ranking.renderedCards();
    expect(cards.length).toBeGreaterThan(0);
    expect(cards.length).toBeLessThan(29);
  });

  it("renders histogram bins byte-equal to the histogram endpoint", async () => {
    await applyDefaultSelection(app);
    const hist = fixture("histogram");
    const card = app.ranking.renderedCards()[0];
    const bars = card.querySelectorAll<HTMLElement>(".hist-bar");
    expect(bars.length).toBe(hist.counts[0].length + hist.counts[1].length);
    bars.forEach((bar) => {
      const label = Number(bar.dataset.label) as 0 | 1;
      const bin = Number(bar.dataset.bin);
      expect(bar.dataset.exact).toBe(String(hist.counts[label][bin]));
    });
  });

  it("hovering a class-0 bin raises every class-0 bin", async () => {
    await applyDefaultSelection(app);
    app.ranking.highlightClass(0);
    for (const card of app.ranking.renderedCards()) {
      card.querySelectorAll<HTMLElement>(".hist-bar").forEach((bar) => {
        expect(bar.style.opacity).toBe(bar.dataset.label === "0" ? "1" : "0.25");
      });
    }
    app.ranking.highlightClass(null);
    for (const card of app.ranking.renderedCards()) {
      card.querySelectorAll<HTMLElement>(".hist-bar").forEach((bar) => {
        expect(bar.style.opacity).toBe("0.75");
      });
    }
  });
});

describe("hull lasso", () => {
  it("reproduces the all-graphs ranking byte for byte", async () => {
    await applyDefaultSelection(app);
    const allOrder = app.ranking.order();

    app.projection.selectAll(); // lassos the convex hull of visible points
    app.projection.apply();
    await flushMicrotasks(30);

    const post = log.filter(
      (r) => r.method === "POST" && r.url.endsWith("/selections"),
    )[1];
    expect(post.body.polygon.length).toBeGreaterThanOrEqual(3);
    expect(post.body.threshold).toBe(0.5);

    expect(app.ranking.order()).toEqual(allOrder);
    const allEntries = fixture("ranking_factual").entries;
    const hullEntries = fixture("ranking_factual_hull").entries;
    expect(JSON.stringify(hullEntries)).toBe(JSON.stringify(allEntries));
  });
});

describe("fidelity panel", () => {
  it("shows the factual rho byte-equal to the API", async () => {
    await applyDefaultSelection(app);
    app.store.update({ focusedGraphlet: META.top_graphlet });
    await flushMicrotasks(30);
    const data = fixture("fidelity_factual");
    const badge = app.fidelity.root.querySelector<HTMLElement>(".stat-badge.rho")!;
    expect(badge.dataset.exact).toBe(JSON.stringify(data.rho));
    expect(badge.textContent).toBe(data.rho.toFixed(4));
    const dots = app.fidelity.root.querySelectorAll("circle");
    expect(dots.length).toBe(data.points.length);
  });

  it("shows the counterfactual total byte-equal and consistent with the plotted points", async () => {
    await applyDefaultSelection(app);
    app.store.update({ focusedGraphlet: META.top_graphlet });
    await flushMicrotasks(30);
    app.store.update({ mode: "counterfactual" });
    await flushMicrotasks(30);

    const data = fixture("fidelity_counterfactual");
    const badge = app.fidelity.root.querySelector<HTMLElement>(".stat-badge.total")!;
    expect(badge.dataset.exact).toBe(JSON.stringify(data.total));

    // Client-side cross-check: the total equals the sum of |L1| of the
    // plotted points (within float tolerance; no recomputation shown).
    const triangles = app.fidelity.root.querySelectorAll<SVGElement>("path[data-l1]");
    expect(triangles.length).toBe(data.points.length);
    let sum = 0;
    triangles.forEach((t) => (sum += Math.abs(JSON.parse(t.dataset.l1!))));
    expect(Math.abs(sum - data.total)).toBeLessThan(1e-9);
  });

  it("renders zero deltas on the zero line", async () => {
    await applyDefaultSelection(app);
    app.store.update({ focusedGraphlet: META.top_graphlet, mode: "counterfactual" });
    await flushMicrotasks(30);
    const panel = app.fidelity.root.querySelector(".fidelity-plot.counterfactual")!;
    const zero = panel.querySelector(".zero-line")!;
    const zeroY = zero.getAttribute("y1");
    panel.querySelectorAll<SVGElement>("path[data-l1]").forEach((t) => {
      if (JSON.parse(t.dataset.exact!) === 0) {
        // Apex of a zero-delta triangle sits on the zero line.
        expect(t.getAttribute("d")).toContain(`M`);
        expect(zeroY).not.toBeNull();
      }
    });
  });
});

describe("mode switch", () => {
  it("re-sorts the cards per the server's counterfactual order", async () => {
    await applyDefaultSelection(app);
    const factualOrder = app.ranking.order();
    app.store.update({ mode: "counterfactual" });
    await flushMicrotasks(30);
    const cfEntries = fixture("ranking_counterfactual").entries;
    expect(app.ranking.order()).toEqual(cfEntries.map((e: any) => e.graphlet));
    expect(app.ranking.order()).not.toEqual(factualOrder);
    for (const card of app.ranking.renderedCards()) {
      const rank = Number(card.dataset.rank);
      const score = card.querySelector<HTMLElement>(".card-score")!;
      expect(score.dataset.exact).toBe(JSON.stringify(cfEntries[rank].total));
    }
  });

  it("invalidates the fidelity panel until the refetch lands", async () => {
    await applyDefaultSelection(app);
    app.store.update({ focusedGraphlet: META.top_graphlet });
    await flushMicrotasks(30);
    expect(app.fidelity.isStale()).toBe(false);
    app.store.update({ mode: "counterfactual" });
    // Synchronously after the switch the panel is stale; the refetch then lands.
    await flushMicrotasks(30);
    expect(app.fidelity.isStale()).toBe(false);
    const badge = app.fidelity.root.querySelector<HTMLElement>(".stat-badge.total");
    expect(badge).not.toBeNull();
  });
});

describe("impact views", () => {
  it("renders both representative layouts with the selection rules", async () => {
    await applyDefaultSelection(app);
    app.store.update({ focusedGraphlet: META.top_graphlet });
    await flushMicrotasks(30);
    const reps = fixture("representatives");
    const layoutTop = fixture("layout_top");
    const captions = Array.from(
      app.impact.root.querySelectorAll<HTMLElement>(".impact-caption"),
    ).map((c) => c.textContent);
    expect(captions[0]).toContain(`graph ${reps.top.graph_id}`);
    expect(captions[0]).toContain(reps.top.rule);
    expect(captions[1]).toContain(`graph ${reps.bottom.graph_id}`);
    const topPanel = app.impact.root.querySelector(".impact-panel.top-view")!;
    expect(topPanel.querySelectorAll("circle").length).toBe(layoutTop.nodes.length);
    expect(topPanel.querySelectorAll("line").length).toBe(layoutTop.edges.length);
  });

  it("highlight toggle off renders a plain layout", async () => {
    await applyDefaultSelection(app);
    app.store.update({ focusedGraphlet: META.top_graphlet });
    await flushMicrotasks(30);
    const before = app.impact.root.querySelectorAll(".highlighted").length;
    const layouts = [fixture("layout_top"), fixture("layout_bottom")];
    const anyHighlight = layouts.some((l) => l.highlight && l.highlight.nodes.length > 0);
    if (anyHighlight) expect(before).toBeGreaterThan(0);
    const toggle = app.impact.root.querySelector<HTMLInputElement>(".toggle")!;
    toggle.checked = false;
    toggle.dispatchEvent(new Event("change"));
    expect(app.impact.root.querySelectorAll(".highlighted").length).toBe(0);
  });

  it("same representative renders identically twice (server layout)", async () => {
    await applyDefaultSelection(app);
    app.store.update({ focusedGraphlet: META.top_graphlet });
    await flushMicrotasks(30);
    const first = app.impact.root.querySelector(".impact-host")!.innerHTML;
    await app.loadImpact();
    await flushMicrotasks(30);
    expect(app.impact.root.querySelector(".impact-host")!.innerHTML).toBe(first);
  });
});

describe("projection column", () => {
  it("renders only graphs passing the slider and warns on empty", async () => {
    const points = fixture("projection").points;
    const visible = points.filter((p: any) => p.confidence > 0.5);
    expect(app.projection.visiblePoints().length).toBe(visible.length);
    app.projection.setControls(1.0, "higher");
    app.projection.render(points);
    expect(app.projection.visiblePoints().length).toBe(0);
    app.projection.apply();
    const warning = app.projection.root.querySelector<HTMLElement>(".warning")!;
    expect(warning.hidden).toBe(false);
    expect(warning.textContent).toContain("empty");
  });

  it("shows an inline error banner when the API fails", async () => {
    vi.unstubAllGlobals();
    vi.stubGlobal(
      "fetch",
      vi.fn(async () => new Response(JSON.stringify({ detail: "boom" }), { status: 500 })),
    );
    const root = document.createElement("div");
    document.body.appendChild(root);
    const broken = new App(root, { syncUrl: false });
    await broken.start();
    await flushMicrotasks();
    const banner = root.querySelector<HTMLElement>(".error-banner")!;
    expect(banner.hidden).toBe(false);
    expect(banner.textContent).toContain("boom");
  });

  it("brushing one class narrows the preview to that class", async () => {
    app.projection.setBrush(0, { lo: 0.6, hi: 1.0 });
    const preview = app.projection.previewSelection();
    expect(preview.length).toBeGreaterThan(0);
    expect(preview.every((p) => p.label === 0 && p.confidence >= 0.6)).toBe(true);
    const all = fixture("projection").points.filter(
      (p: any) => p.label === 0 && p.confidence >= 0.6,
    );
    expect(preview.length).toBe(all.length);
  });
});
