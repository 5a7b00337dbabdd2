// Thin HTTP client for the service. The fetch implementation is
// injectable so tests can intercept every request.

import type { MessageResponse, SceneDocument } from "./types.js";

export type FetchLike = (
  url: string,
  init?: { method?: string; headers?: Record<string, string>; body?: string }
) => Promise<{ status: number; json(): Promise<unknown> }>;

export class HttpError extends Error {
  constructor(
    readonly status: number,
    readonly detail: unknown
  ) {
    super(`service returned ${status}`);
  }
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchImpl: FetchLike
  ) {}

  private async request<T>(
    path: string,
    method: "GET" | "POST",
    body?: unknown
  ): Promise<T> {
    const response = await this.fetchImpl(`${this.baseUrl}${path}`, {
      method,
      headers: { "Content-Type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const payload = await response.json().catch(() => null);
    if (response.status < 200 || response.status >= 300) {
      throw new HttpError(response.status, payload);
    }
    return payload as T;
  }

  health(): Promise<{ status: string }> {
    return this.request("/health", "GET");
  }

  async createSession(): Promise<string> {
    const payload = await this.request<{ session_id: string }>(
      "/sessions",
      "POST",
      {}
    );
    return payload.session_id;
  }

  sendMessage(sessionId: string, text: string): Promise<MessageResponse> {
    return this.request(`/sessions/${sessionId}/messages`, "POST", { text });
  }

  fetchScene(options?: {
    highlightFrom?: string;
    highlightTo?: string;
    meshes?: boolean;
  }): Promise<SceneDocument> {
    const params = new URLSearchParams();
    if (options?.highlightFrom) params.set("highlight_from", options.highlightFrom);
    if (options?.highlightTo) params.set("highlight_to", options.highlightTo);
    if (options?.meshes) params.set("meshes", "true");
    const query = params.toString();
    return this.request(`/model/scene${query ? `?${query}` : ""}`, "GET");
  }

  modelSummary(): Promise<{ schema: string; graph: string }> {
    return this.request("/model/summary", "GET");
  }
}
