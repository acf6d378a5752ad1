/** Fixture-backed fetch stub: routes API URLs to the golden response
 * bytes captured from a fixed BA-House session of the real service. */

import { readFileSync } from "node:fs";
import { join } from "node:path";
import { vi } from "vitest";

// vitest runs from the frontend root (package.json scripts).
const FIXTURE_DIR = join(process.cwd(), "tests", "fixtures");

export function fixtureBytes(name: string): string {
  return readFileSync(join(FIXTURE_DIR, `${name}.json`), "utf-8");
}

export function fixture<T = any>(name: string): T {
  return JSON.parse(fixtureBytes(name)) as T;
}

export const META = fixture<{
  dataset: string;
  selection: string;
  hull_selection: string;
  top_graphlet: number;
}>("meta");

export interface RecordedRequest {
  url: string;
  method: string;
  body: any;
}

/** Install a fetch stub mapping the fixed session's URLs to fixtures.
 * POST /selections alternates: first call returns the all-graphs
 * selection, later calls the hull selection (ids differ, content same
 * membership). Returns the request log. */
export function installFixtureFetch(): RecordedRequest[] {
  const log: RecordedRequest[] = [];
  const ds = META.dataset;
  let selectionPosts = 0;

  const route = (url: string, init?: RequestInit): string | null => {
    const method = init?.method ?? "GET";
    if (url === "/api/datasets") return fixtureBytes("datasets");
    if (url === `/api/datasets/${ds}/projection`) return fixtureBytes("projection");
    if (url === `/api/datasets/${ds}/selections` && method === "POST") {
      selectionPosts += 1;
      return fixtureBytes(selectionPosts === 1 ? "selection_all" : "selection_hull");
    }
    const ranking = url.match(/^\/api\/selections\/([^/]+)\/ranking\?mode=(\w+)$/);
    if (ranking) {
      const [, sid, mode] = ranking;
      if (mode === "counterfactual") return fixtureBytes("ranking_counterfactual");
      return fixtureBytes(sid === META.hull_selection ? "ranking_factual_hull" : "ranking_factual");
    }
    const fidelity = url.match(/^\/api\/selections\/[^/]+\/graphlets\/(\d+)\/fidelity\?mode=(\w+)$/);
    if (fidelity) {
      return fixtureBytes(fidelity[2] === "factual" ? "fidelity_factual" : "fidelity_counterfactual");
    }
    if (/\/graphlets\/\d+\/histogram\?bins=\d+$/.test(url)) return fixtureBytes("histogram");
    if (/\/representatives\?graphlet=\d+&mode=\w+$/.test(url)) return fixtureBytes("representatives");
    const layout = url.match(/^\/api\/graphs\/(\d+)\/layout\?/);
    if (layout) {
      const reps = fixture("representatives");
      const gid = Number(layout[1]);
      if (gid === reps.top.graph_id) return fixtureBytes("layout_top");
      if (gid === reps.bottom.graph_id) return fixtureBytes("layout_bottom");
    }
    return null;
  };

  vi.stubGlobal(
    "fetch",
    vi.fn(async (input: RequestInfo | URL, init?: RequestInit) => {
      const url = String(input);
      log.push({
        url,
        method: init?.method ?? "GET",
        body: init?.body ? JSON.parse(String(init.body)) : null,
      });
      const bytes = route(url, init);
      if (bytes === null) {
        return new Response(JSON.stringify({ detail: `no fixture for ${url}` }), { status: 404 });
      }
      return new Response(bytes, {
        status: init?.method === "POST" ? 201 : 200,
        headers: { "content-type": "application/json" },
      });
    }),
  );
  return log;
}

export function flushMicrotasks(rounds = 12): Promise<void> {
  let p = Promise.resolve();
  for (let i = 0; i < rounds; i++) p = p.then(() => undefined);
  return p;
}
