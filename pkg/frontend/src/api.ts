// HTTP client with latest-wins request handling: each panel keys its
// own AbortController, so a newer interaction cancels the superseded
// request and stale responses never reach the screen.

import type {
  Evidence,
  InfluenceResponse,
  MarginalsResponse,
  NetworkDescription,
  QueryResponse,
  WhatIfResponse,
} from "./types.js";

export class ApiRequestError extends Error {
  constructor(
    public readonly status: number,
    public readonly errorName: string,
    message: string,
  ) {
    super(message);
    this.name = "ApiRequestError";
  }
}

export function isAbort(err: unknown): boolean {
  return err instanceof DOMException && err.name === "AbortError";
}

export class ApiClient {
  private controllers = new Map<string, AbortController>();

  constructor(private readonly baseUrl: string = "") {}

  private async request<T>(
    path: string,
    init: RequestInit,
    panel?: string,
  ): Promise<T> {
    if (panel !== undefined) {
      this.controllers.get(panel)?.abort();
      const controller = new AbortController();
      this.controllers.set(panel, controller);
      init = { ...init, signal: controller.signal };
    }
    const res = await fetch(this.baseUrl + path, init);
    let body: unknown = null;
    try {
      body = await res.json();
    } catch {
      body = null;
    }
    if (!res.ok) {
      const err = body as { error?: string; message?: string } | null;
      throw new ApiRequestError(
        res.status,
        err?.error ?? "HttpError",
        err?.message ?? `request failed with status ${res.status}`,
      );
    }
    return body as T;
  }

  private post<T>(path: string, payload: unknown, panel?: string): Promise<T> {
    return this.request<T>(
      path,
      {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify(payload),
      },
      panel,
    );
  }

  network(): Promise<NetworkDescription> {
    return this.request<NetworkDescription>("/api/network", { method: "GET" });
  }

  marginals(evidence: Evidence): Promise<MarginalsResponse> {
    return this.post("/api/marginals", { evidence }, "marginals");
  }

  query(evidence: Evidence, target: Record<string, string>): Promise<QueryResponse> {
    return this.post("/api/query", { evidence, target }, "query");
  }

  influence(
    evidence: Evidence,
    target: Record<string, string>,
  ): Promise<InfluenceResponse> {
    return this.post("/api/influence", { evidence, target }, "influence");
  }

  whatif(
    base: Evidence,
    target: Record<string, string>,
    improvements: Record<string, string>,
    combined: boolean,
  ): Promise<WhatIfResponse> {
    return this.post(
      "/api/whatif",
      { base, target, improvements, combined },
      "whatif",
    );
  }
}
