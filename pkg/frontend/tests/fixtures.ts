import type { AnalysisDocument, ClusteringParams } from "../src/types.js";

export interface FixtureSpec {
  labels?: string[];
  points?: { label: string; x: number; y: number }[];
  blocks?: string[][];
  clustering?: ClusteringParams;
  stress?: number;
}

const LABELS = ["r0", "r1", "r2", "r3", "r4", "r5"];

const POINTS = [
  { label: "r0", x: 0.0, y: 0.0 },
  { label: "r1", x: 4.0, y: 6.0 },
  { label: "r2", x: 0.5, y: 0.5 },
  { label: "r3", x: 5.0, y: 7.0 },
  { label: "r4", x: 4.5, y: 6.5 },
  { label: "r5", x: 10.0, y: 0.0 },
];

const BLOCKS = [
  ["r0", "r2"],
  ["r1", "r3", "r4"],
  ["r5"],
];

export function analysisFixture(spec: FixtureSpec = {}): AnalysisDocument {
  const labels = spec.labels ?? LABELS;
  const points = spec.points ?? POINTS.filter((p) => labels.includes(p.label));
  const blocks = spec.blocks ?? BLOCKS.map((b) => b.filter((l) => labels.includes(l)));
  const n = labels.length;
  const values = Array.from({ length: n }, (_, i) =>
    Array.from({ length: n }, (_, j) => (i === j ? 0 : 1 + Math.abs(i - j))),
  );
  return {
    repairs: labels.map((label, i) => ({
      label,
      fact_indices: [i],
      facts: [`fact_a_${label}(c)`, `fact_b_${label}(c, d)`],
    })),
    matrix: { labels: [...labels], values },
    embedding: {
      points,
      achieved_stress: spec.stress ?? 0.123456,
      iterations_used: 17,
    },
    clustering: spec.clustering ?? { method: "spectral", k: blocks.length, sigma: 5.5, seed: 0 },
    partition: { blocks: blocks.filter((b) => b.length > 0) },
    eigenvalues: labels.map((_, i) => 1 - i * 0.1),
  };
}

export function singletonBlocks(labels: string[]): string[][] {
  return labels.map((l) => [l]);
}
