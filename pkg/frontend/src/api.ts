/** Thin typed client over the HTTP API.  One in-flight request per panel:
 * issuing a new request from the same panel aborts the previous one. */

import type {
  GenerateRequest,
  InterpolateRequest,
  SequenceRequest,
  TrajectoryResponse,
  Vocab,
} from "./types";

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    public status: number,
    public detail: unknown,
  ) {
    super(`request failed with status ${status}`);
  }
}

export class ApiClient {
  private inflight = new Map<string, AbortController>();

  constructor(
    private baseUrl = "",
    private fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async post<T>(path: string, body: unknown, panel?: string): Promise<T> {
    let signal: AbortSignal | undefined;
    if (panel !== undefined) {
      this.inflight.get(panel)?.abort();
      const controller = new AbortController();
      this.inflight.set(panel, controller);
      signal = controller.signal;
    }
    const response = await this.fetchImpl(this.baseUrl + path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
      signal,
    });
    if (!response.ok) {
      throw new ApiError(response.status, await response.json().catch(() => null));
    }
    return (await response.json()) as T;
  }

  async health(): Promise<{ ready: boolean; checkpoint: string | null }> {
    const response = await this.fetchImpl(this.baseUrl + "/healthz");
    if (!response.ok) throw new ApiError(response.status, null);
    return response.json();
  }

  async vocab(): Promise<Vocab> {
    const response = await this.fetchImpl(this.baseUrl + "/api/vocab");
    if (!response.ok) throw new ApiError(response.status, null);
    return response.json();
  }

  generate(req: GenerateRequest, panel = "generate"): Promise<TrajectoryResponse> {
    return this.post("/api/generate", req, panel);
  }

  interpolate(req: InterpolateRequest, panel = "blend"): Promise<TrajectoryResponse> {
    return this.post("/api/interpolate", req, panel);
  }

  sequence(req: SequenceRequest, panel = "sequence"): Promise<TrajectoryResponse> {
    return this.post("/api/sequence", req, panel);
  }
}
