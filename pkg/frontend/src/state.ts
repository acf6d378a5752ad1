/** Workflow state shared by the four columns.
 *
 * Invariants: a graphlet can only be focused once a selection exists,
 * and changing the explanation mode invalidates the fidelity panel
 * until it refetches. The full state round-trips through the URL hash
 * so an analysis session is shareable. */

import type { ExplanationMode } from "./types";

export interface UiState {
  dataset: string | null;
  threshold: number;
  direction: "higher" | "lower";
  selectionId: string | null;
  mode: ExplanationMode;
  focusedGraphlet: number | null;
}

export const initialState: UiState = {
  dataset: null,
  threshold: 0.5,
  direction: "higher",
  selectionId: null,
  mode: "factual",
  focusedGraphlet: null,
};

type Listener = (state: UiState, changed: (keyof UiState)[]) => void;

export class Store {
  private state: UiState;
  private listeners: Listener[] = [];

  constructor(state: UiState = initialState) {
    this.state = { ...state };
  }

  get(): UiState {
    return { ...this.state };
  }

  subscribe(fn: Listener): () => void {
    this.listeners.push(fn);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== fn);
    };
  }

  update(patch: Partial<UiState>): void {
    const next = { ...this.state, ...patch };
    // Selection changes orphan the focused graphlet; so does losing it.
    if (patch.selectionId !== undefined && patch.selectionId !== this.state.selectionId) {
      if (patch.focusedGraphlet === undefined) next.focusedGraphlet = null;
    }
    if (next.selectionId === null) next.focusedGraphlet = null;
    const changed = (Object.keys(next) as (keyof UiState)[]).filter(
      (k) => next[k] !== this.state[k],
    );
    if (changed.length === 0) return;
    this.state = next;
    for (const fn of [...this.listeners]) fn(this.get(), changed);
  }
}

/** Serialize the restorable part of the state into a URL hash string. */
export function encodeState(state: UiState): string {
  const params = new URLSearchParams();
  if (state.dataset) params.set("d", state.dataset);
  params.set("t", String(state.threshold));
  params.set("dir", state.direction);
  if (state.selectionId) params.set("s", state.selectionId);
  params.set("m", state.mode);
  if (state.focusedGraphlet !== null) params.set("g", String(state.focusedGraphlet));
  return params.toString();
}

export function decodeState(hash: string): UiState {
  const params = new URLSearchParams(hash.replace(/^#/, ""));
  const direction = params.get("dir") === "lower" ? "lower" : "higher";
  const mode = params.get("m") === "counterfactual" ? "counterfactual" : "factual";
  const threshold = Number(params.get("t") ?? initialState.threshold);
  const selectionId = params.get("s");
  const rawFocus = params.get("g");
  const focusedGraphlet =
    selectionId !== null && rawFocus !== null && /^\d+$/.test(rawFocus) ? Number(rawFocus) : null;
  return {
    dataset: params.get("d"),
    threshold: Number.isFinite(threshold) ? threshold : initialState.threshold,
    direction,
    selectionId,
    mode,
    focusedGraphlet,
  };
}
