export interface SessionSummary {
  id: string;
  repair_count: number;
  labels: string[];
}

export interface RepairRecord {
  label: string;
  fact_indices: number[];
  facts: string[];
}

export interface EmbeddingPoint {
  label: string;
  x: number;
  y: number;
}

export interface SpectralParams {
  method: "spectral";
  k: number;
  sigma?: number;
  seed?: number;
}

export interface ThresholdParams {
  method: "threshold";
  tau: number;
}

export type ClusteringParams = SpectralParams | ThresholdParams;

export interface AnalysisDocument {
  repairs: RepairRecord[];
  matrix: { labels: string[]; values: number[][] };
  embedding: {
    points: EmbeddingPoint[];
    achieved_stress: number;
    iterations_used: number;
  };
  clustering: ClusteringParams;
  partition: { blocks: string[][] };
  eigenvalues: number[];
}

export type SemanticsName = "AR" | "IAR" | "ICR";

export type ScopeRequest = string | { repairs: string[] };

export interface QueryRequestBody {
  query: string;
  semantics: SemanticsName;
  scope: ScopeRequest;
}

export interface ScopedAnswerDocument {
  query: string;
  semantics: SemanticsName;
  scope: { kind: string; cluster?: number; repairs: string[] };
  answer: boolean;
  consensus_atoms: number;
}

export interface SaveDocument {
  saved: string;
  id: string;
}
