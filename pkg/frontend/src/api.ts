/** Typed client for the session service. The UI never mutates pipeline
 * results: everything here is a read, a launch, or a gate action. */

export interface Progress {
  phase_ordinal: number;
  total_phases: number;
  elapsed_seconds: number;
}

export interface SessionView {
  session_id: string;
  phase: string;
  gate_phase: string | null;
  progress: Progress;
  config: Record<string, unknown>;
  artifacts: string[];
  stats: Record<string, unknown>;
  failure: { error: string; type: string } | null;
}

export type GateAction = "approve" | "edit" | "abort";

export class ApiError extends Error {
  constructor(
    public status: number,
    public detail: string,
  ) {
    super(`HTTP ${status}: ${detail}`);
  }
}

type FetchLike = typeof fetch;

async function raiseForStatus(response: Response): Promise<void> {
  if (response.ok) return;
  let detail = response.statusText;
  try {
    const body = (await response.json()) as { detail?: unknown };
    if (body.detail !== undefined) detail = JSON.stringify(body.detail);
  } catch {
    /* non-JSON error body: keep the status text */
  }
  throw new ApiError(response.status, detail);
}

export class ApiClient {
  constructor(
    public baseUrl: string,
    private fetchImpl: FetchLike = fetch,
  ) {}

  private async request(path: string, init?: RequestInit): Promise<Response> {
    const response = await this.fetchImpl(`${this.baseUrl}${path}`, init);
    await raiseForStatus(response);
    return response;
  }

  async healthz(): Promise<boolean> {
    const response = await this.request("/healthz");
    return ((await response.json()) as { status: string }).status === "ok";
  }

  async createSession(
    topic: string,
    numIdeas?: number,
    overrides?: Record<string, unknown>,
  ): Promise<SessionView> {
    const body: Record<string, unknown> = { topic };
    if (numIdeas !== undefined) body.num_ideas = numIdeas;
    if (overrides) body.config_overrides = overrides;
    const response = await this.request("/sessions", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
    return (await response.json()) as SessionView;
  }

  async listSessions(): Promise<SessionView[]> {
    return (await (await this.request("/sessions")).json()) as SessionView[];
  }

  async getSession(sessionId: string): Promise<SessionView> {
    return (await (
      await this.request(`/sessions/${sessionId}`)
    ).json()) as SessionView;
  }

  async getArtifact(sessionId: string, name: string): Promise<unknown> {
    return (
      await this.request(`/sessions/${sessionId}/artifacts/${name}`)
    ).json();
  }

  /** Raw bytes, for downloads that must match the endpoint exactly. */
  async getArtifactBytes(sessionId: string, name: string): Promise<Uint8Array> {
    const response = await this.request(
      `/sessions/${sessionId}/artifacts/${name}`,
    );
    return new Uint8Array(await response.arrayBuffer());
  }

  async postGate(
    sessionId: string,
    action: GateAction,
    payload?: Record<string, unknown>,
  ): Promise<SessionView> {
    const body: Record<string, unknown> = { action };
    if (payload) body.payload = payload;
    const response = await this.request(`/sessions/${sessionId}/gate`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
    return (await response.json()) as SessionView;
  }
}
