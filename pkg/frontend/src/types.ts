/** Payload shapes of the HTTP/JSON API. The UI renders these verbatim:
 * every displayed number originates in one of these responses. */

export interface DatasetInfo {
  id: string;
  name: string;
  n_graphs: number;
  class_names: [string, string];
  class_counts: [number, number];
  has_census: boolean;
  has_gcn: boolean;
  has_surrogate: boolean;
  active: boolean;
}

export interface ProjectionPoint {
  graph_id: number;
  x: number;
  y: number;
  label: 0 | 1;
  confidence: number;
}

export interface ProjectionResponse {
  dataset: string;
  points: ProjectionPoint[];
}

export interface SelectionResponse {
  id: string;
  dataset: string;
  graph_ids: number[];
  n_graphs: number;
  class_counts: [number, number];
}

export type ExplanationMode = "factual" | "counterfactual";

export interface FactualRankingEntry {
  graphlet: number;
  name: string;
  score: number;
  rho: number;
  degenerate: boolean;
}

export interface CounterfactualRankingEntry {
  graphlet: number;
  name: string;
  score: number;
  total: number;
}

export type RankingEntry = FactualRankingEntry | CounterfactualRankingEntry;

export interface RankingResponse {
  selection: string;
  mode: ExplanationMode;
  entries: RankingEntry[];
}

export interface FactualFidelityPoint {
  graph_id: number;
  frequency: number;
  class_prob: number;
  label: 0 | 1;
}

export interface CounterfactualFidelityPoint {
  graph_id: number;
  frequency: number;
  delta: number;
  l1: number;
  label: 0 | 1;
}

export interface FactualFidelityResponse {
  selection: string;
  mode: "factual";
  graphlet: number;
  rho: number;
  degenerate: boolean;
  points: FactualFidelityPoint[];
}

export interface CounterfactualFidelityResponse {
  selection: string;
  mode: "counterfactual";
  graphlet: number;
  total: number;
  points: CounterfactualFidelityPoint[];
}

export type FidelityResponse = FactualFidelityResponse | CounterfactualFidelityResponse;

export interface HistogramResponse {
  selection: string;
  graphlet: number;
  edges: number[];
  counts: [number[], number[]];
}

export interface RepresentativesResponse {
  selection: string;
  mode: ExplanationMode;
  graphlet: number;
  top: { graph_id: number; rule: string };
  bottom: { graph_id: number; rule: string };
}

export interface LayoutNode {
  id: number;
  x: number;
  y: number;
}

export interface LayoutResponse {
  graph_id: number;
  dataset: string;
  label: 0 | 1;
  nodes: LayoutNode[];
  edges: [number, number][];
  highlight: { graphlet: number; nodes: number[]; edges: [number, number][] } | null;
}

export interface CatalogEntry {
  index: number;
  n_nodes: number;
  n_edges: number;
  name: string;
  edges: [number, number][];
}

export interface SelectionRequest {
  threshold?: number;
  direction?: "higher" | "lower";
  polygon?: [number, number][];
  brushes?: Record<string, [number, number]>;
}
