import type {
  AnalysisDocument,
  ClusteringParams,
  QueryRequestBody,
  SaveDocument,
  ScopedAnswerDocument,
  SessionSummary,
} from "./types.js";

export interface FetchResponseLike {
  ok: boolean;
  status: number;
  text(): Promise<string>;
}

export type FetchLike = (
  url: string,
  init?: { method?: string; headers?: Record<string, string>; body?: string },
) => Promise<FetchResponseLike>;

export class ServiceError extends Error {
  constructor(
    readonly status: number,
    readonly detail: string,
    readonly raw: string,
    readonly line?: number,
    readonly column?: number,
  ) {
    super(detail);
    this.name = "ServiceError";
  }
}

/** A parsed response document together with the exact body text it came from. */
export interface ApiResult<T> {
  document: T;
  raw: string;
}

const defaultFetch: FetchLike = (url, init) => fetch(url, init);

export class ApiClient {
  private readonly baseUrl: string;

  constructor(
    baseUrl: string,
    private readonly fetchImpl: FetchLike = defaultFetch,
  ) {
    this.baseUrl = baseUrl.replace(/\/+$/, "");
  }

  createSession(kbText: string, config?: object): Promise<ApiResult<SessionSummary>> {
    const body: Record<string, unknown> = { kb_text: kbText };
    if (config !== undefined) body.config = config;
    return this.request<SessionSummary>("POST", "/sessions", body);
  }

  loadSession(path: string): Promise<ApiResult<SessionSummary>> {
    return this.request<SessionSummary>("POST", "/sessions/load", { path });
  }

  saveSession(id: string, path: string): Promise<ApiResult<SaveDocument>> {
    return this.request<SaveDocument>("POST", `/sessions/${id}/save`, { path });
  }

  analysis(id: string, params?: ClusteringParams): Promise<ApiResult<AnalysisDocument>> {
    let path = `/sessions/${id}/analysis`;
    if (params) {
      const search = new URLSearchParams();
      for (const [key, value] of Object.entries(params)) {
        if (value !== undefined) search.set(key, String(value));
      }
      path += `?${search.toString()}`;
    }
    return this.request<AnalysisDocument>("GET", path);
  }

  query(id: string, body: QueryRequestBody): Promise<ApiResult<ScopedAnswerDocument>> {
    return this.request<ScopedAnswerDocument>("POST", `/sessions/${id}/query`, body);
  }

  async matrixCsv(id: string): Promise<string> {
    const res = await this.fetchImpl(`${this.baseUrl}/sessions/${id}/matrix.csv`);
    const raw = await res.text();
    if (!res.ok) throw toServiceError(res.status, raw);
    return raw;
  }

  private async request<T>(
    method: string,
    path: string,
    body?: unknown,
  ): Promise<ApiResult<T>> {
    const init: { method: string; headers?: Record<string, string>; body?: string } = {
      method,
    };
    if (body !== undefined) {
      init.headers = { "content-type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const res = await this.fetchImpl(this.baseUrl + path, init);
    const raw = await res.text();
    if (!res.ok) throw toServiceError(res.status, raw);
    return { document: JSON.parse(raw) as T, raw };
  }
}

function toServiceError(status: number, raw: string): ServiceError {
  let detail = raw;
  let line: number | undefined;
  let column: number | undefined;
  try {
    const doc = JSON.parse(raw);
    if (doc && typeof doc.detail === "string") {
      detail = doc.detail;
      if (typeof doc.line === "number") line = doc.line;
      if (typeof doc.column === "number") column = doc.column;
    }
  } catch {
    // not JSON; keep the raw body as the detail
  }
  return new ServiceError(status, detail, raw, line, column);
}
