/** Thin typed client for the explanation service. Every call carries an
 * AbortSignal so views can cancel requests that became stale after a
 * mode or selection change. */

import type {
  CatalogEntry,
  DatasetInfo,
  ExplanationMode,
  FidelityResponse,
  HistogramResponse,
  LayoutResponse,
  ProjectionResponse,
  RankingResponse,
  RepresentativesResponse,
  SelectionRequest,
  SelectionResponse,
} from "./types";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly detail: string,
  ) {
    super(`API ${status}: ${detail}`);
  }
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  const response = await fetch(url, init);
  const text = await response.text();
  if (!response.ok) {
    let detail = text;
    try {
      detail = JSON.parse(text).detail ?? text;
    } catch {
      // plain-text error body
    }
    throw new ApiError(response.status, detail);
  }
  return JSON.parse(text) as T;
}

export class ApiClient {
  constructor(readonly base: string = "") {}

  datasets(signal?: AbortSignal): Promise<DatasetInfo[]> {
    return request(`${this.base}/api/datasets`, { signal });
  }

  catalog(signal?: AbortSignal): Promise<CatalogEntry[]> {
    return request(`${this.base}/api/catalog`, { signal });
  }

  projection(dataset: string, signal?: AbortSignal): Promise<ProjectionResponse> {
    return request(`${this.base}/api/datasets/${dataset}/projection`, { signal });
  }

  createSelection(
    dataset: string,
    body: SelectionRequest,
    signal?: AbortSignal,
  ): Promise<SelectionResponse> {
    return request(`${this.base}/api/datasets/${dataset}/selections`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
      signal,
    });
  }

  ranking(selection: string, mode: ExplanationMode, signal?: AbortSignal): Promise<RankingResponse> {
    return request(`${this.base}/api/selections/${selection}/ranking?mode=${mode}`, { signal });
  }

  fidelity(
    selection: string,
    graphlet: number,
    mode: ExplanationMode,
    signal?: AbortSignal,
  ): Promise<FidelityResponse> {
    return request(
      `${this.base}/api/selections/${selection}/graphlets/${graphlet}/fidelity?mode=${mode}`,
      { signal },
    );
  }

  histogram(
    selection: string,
    graphlet: number,
    bins: number,
    signal?: AbortSignal,
  ): Promise<HistogramResponse> {
    return request(
      `${this.base}/api/selections/${selection}/graphlets/${graphlet}/histogram?bins=${bins}`,
      { signal },
    );
  }

  representatives(
    selection: string,
    graphlet: number,
    mode: ExplanationMode,
    signal?: AbortSignal,
  ): Promise<RepresentativesResponse> {
    return request(
      `${this.base}/api/selections/${selection}/representatives?graphlet=${graphlet}&mode=${mode}`,
      { signal },
    );
  }

  layout(
    graphId: number,
    highlight: number | null,
    dataset: string,
    signal?: AbortSignal,
  ): Promise<LayoutResponse> {
    const params = new URLSearchParams({ dataset });
    if (highlight !== null) params.set("highlight", String(highlight));
    return request(`${this.base}/api/graphs/${graphId}/layout?${params}`, { signal });
  }
}
