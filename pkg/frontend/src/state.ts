import type {
  AnalysisDocument,
  ClusteringParams,
  ScopeRequest,
  SemanticsName,
} from "./types.js";

export type ScopeSelection =
  | { kind: "cluster"; index: number }
  | { kind: "repairs"; labels: string[] };

export interface HistoryEntry {
  query: string;
  semantics: SemanticsName;
  scope: ScopeRequest;
  answer: boolean;
  /** Exact response body the answer was read from. */
  raw: string;
}

/** Returns a validation message for unusable query text, or null when fine. */
export function validateQueryText(text: string): string | null {
  if (text.trim() === "") return "enter a query before submitting";
  return null;
}

export class ViewState {
  analysis: AnalysisDocument | null = null;
  labels: string[] = [];
  scope: ScopeSelection | null = null;
  private readonly entries: HistoryEntry[] = [];

  constructor(readonly sessionId: string) {}

  get history(): readonly HistoryEntry[] {
    return this.entries;
  }

  get clustering(): ClusteringParams | null {
    return this.analysis ? this.analysis.clustering : null;
  }

  setAnalysis(doc: AnalysisDocument, opts: { clearScope?: boolean } = {}): void {
    this.analysis = doc;
    this.labels = doc.repairs.map((r) => r.label);
    if (opts.clearScope) {
      this.scope = null;
    } else {
      this.scope = this.revalidated(this.scope);
    }
  }

  toggleCluster(index: number): void {
    const blocks = this.blocks();
    if (index < 0 || index >= blocks.length) {
      throw new RangeError(`no cluster ${index}; partition has ${blocks.length} blocks`);
    }
    if (this.scope && this.scope.kind === "cluster" && this.scope.index === index) {
      this.scope = null;
    } else {
      this.scope = { kind: "cluster", index };
    }
  }

  toggleRepair(label: string): void {
    if (!this.labels.includes(label)) {
      throw new RangeError(`unknown repair label '${label}'`);
    }
    const current = this.scopeLabels();
    const next = current.includes(label)
      ? current.filter((l) => l !== label)
      : [...current, label];
    this.scope = next.length > 0 ? { kind: "repairs", labels: next } : null;
  }

  setManualSelection(labels: string[]): void {
    const known = labels.filter((l) => this.labels.includes(l));
    this.scope = known.length > 0 ? { kind: "repairs", labels: known } : null;
  }

  clearScope(): void {
    this.scope = null;
  }

  /** Repair labels covered by the current scope, in canonical label order. */
  scopeLabels(): string[] {
    if (!this.scope) return [];
    if (this.scope.kind === "cluster") {
      const blocks = this.blocks();
      return this.scope.index < blocks.length ? [...blocks[this.scope.index]] : [];
    }
    const picked = new Set(this.scope.labels);
    return this.labels.filter((l) => picked.has(l));
  }

  /** The scope as the service expects it, or null when nothing is selected. */
  scopeRequest(): ScopeRequest | null {
    if (!this.scope) return null;
    if (this.scope.kind === "cluster") return `cluster:${this.scope.index}`;
    return { repairs: this.scopeLabels() };
  }

  appendHistory(entry: HistoryEntry): void {
    this.entries.push(entry);
  }

  private blocks(): string[][] {
    return this.analysis ? this.analysis.partition.blocks : [];
  }

  private revalidated(scope: ScopeSelection | null): ScopeSelection | null {
    if (!scope) return null;
    if (scope.kind === "cluster") {
      return scope.index < this.blocks().length ? scope : null;
    }
    const known = scope.labels.filter((l) => this.labels.includes(l));
    return known.length > 0 ? { kind: "repairs", labels: known } : null;
  }
}

export function describeScope(scope: ScopeRequest): string {
  if (typeof scope === "string") return scope;
  return `repairs ${scope.repairs.join(" ")}`;
}

export function formatAnswer(answer: boolean): string {
  return answer ? "True" : "False";
}
