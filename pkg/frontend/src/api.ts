// Thin client for the dialogue service. The fetch function is injected so
// tests can run against canned responses without a browser or server.

import type {
  AgentsResponse,
  HistoryResponse,
  NetworkResponse,
  SessionResponse,
} from "./types.js";

export type FetchLike = (
  url: string,
  init?: { method?: string; headers?: Record<string, string>; body?: string }
) => Promise<{ ok: boolean; status: number; json(): Promise<unknown> }>;

export class ApiError extends Error {
  constructor(public status: number, detail: string) {
    super(`API error ${status}: ${detail}`);
  }
}

export class ApiClient {
  constructor(
    private fetchFn: FetchLike,
    private base: string = ""
  ) {}

  private async request<T>(path: string, method = "GET", body?: unknown): Promise<T> {
    const response = await this.fetchFn(this.base + path, {
      method,
      headers: body === undefined ? undefined : { "Content-Type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const payload = (await response.json()) as Record<string, unknown>;
    if (!response.ok) {
      throw new ApiError(response.status, String(payload["detail"] ?? "unknown"));
    }
    return payload as T;
  }

  network(): Promise<NetworkResponse> {
    return this.request("/api/network");
  }

  startSession(scenario: string, pins: string[]): Promise<SessionResponse> {
    return this.request("/api/session", "POST", { scenario, pins });
  }

  agents(): Promise<AgentsResponse> {
    return this.request("/api/agents");
  }

  reportCongestion(start: number, end: number): Promise<SessionResponse> {
    return this.request("/api/actions/report-congestion", "POST", { start, end });
  }

  clearCorridor(start: number, end: number): Promise<SessionResponse> {
    return this.request("/api/actions/clear-corridor", "POST", { start, end });
  }

  history(): Promise<HistoryResponse> {
    return this.request("/api/history");
  }
}
