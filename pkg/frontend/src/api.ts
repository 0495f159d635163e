// Thin typed client over the HTTP API. The fetch function is injectable so
// tests can run against an in-memory server.

import type {
  AgreementPayload,
  ChatPayload,
  ExpertLabel,
  KhopPayload,
  PathsPayload,
  StatsPayload,
  TripleDetail,
  TriplesPage,
} from "./types";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    public status: number,
    message: string,
  ) {
    super(message);
  }
}

export class ApiClient {
  constructor(
    private baseUrl: string = "",
    private fetchFn: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    let response: Response;
    try {
      response = await this.fetchFn(this.baseUrl + path, init);
    } catch (error) {
      throw new ApiError(0, `network failure: ${String(error)}`);
    }
    if (!response.ok) {
      let detail = response.statusText;
      try {
        const body = (await response.json()) as { detail?: string; error?: string };
        detail = body.detail ?? body.error ?? detail;
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new ApiError(response.status, detail);
    }
    return (await response.json()) as T;
  }

  stats(): Promise<StatsPayload> {
    return this.request("/stats");
  }

  triples(params: { status?: string; page?: number; pageSize?: number }): Promise<TriplesPage> {
    const query = new URLSearchParams();
    if (params.status) query.set("status", params.status);
    if (params.page) query.set("page", String(params.page));
    if (params.pageSize) query.set("page_size", String(params.pageSize));
    const suffix = query.toString() ? `?${query.toString()}` : "";
    return this.request(`/triples${suffix}`);
  }

  tripleDetail(id: string): Promise<TripleDetail> {
    return this.request(`/triples/${id}`);
  }

  review(id: string, label: ExpertLabel, reviewer: string, note = ""): Promise<unknown> {
    return this.request(`/triples/${id}/review`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ expert_label: label, reviewer, note }),
    });
  }

  khop(source: string, k: number, direction = "both"): Promise<KhopPayload> {
    const query = new URLSearchParams({ source, k: String(k), direction });
    return this.request(`/graph/khop?${query.toString()}`);
  }

  paths(source: string, target: string, maxHops: number, direction = "both"): Promise<PathsPayload> {
    const query = new URLSearchParams({
      source,
      target,
      max_hops: String(maxHops),
      direction,
    });
    return this.request(`/graph/paths?${query.toString()}`);
  }

  agreement(): Promise<AgreementPayload> {
    return this.request("/agreement");
  }

  chat(question: string): Promise<ChatPayload> {
    return this.request("/chat", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ question }),
    });
  }
}
