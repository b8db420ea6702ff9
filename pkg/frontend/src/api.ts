/** Typed client for the play gateway. Every number shown in the UI comes
 * from one of these calls; the console does no utility math of its own. */

import type {
  CreateSessionOptions,
  Envelope,
  ErrorBody,
  HumanAction,
  SessionState,
  SessionSummary,
  TemplateInfo,
  UtilityQuote,
} from "./model.js";

/** The gateway answered with an error envelope (404 / 409 / 422). */
export class GatewayApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    readonly reason: string,
  ) {
    super(`${code}: ${reason}`);
    this.name = "GatewayApiError";
  }
}

/** The gateway could not be reached at all (network-level failure). */
export class GatewayUnreachableError extends Error {
  constructor(detail: string) {
    super(`gateway unreachable: ${detail}`);
    this.name = "GatewayUnreachableError";
  }
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

/** What the console needs from a gateway; GatewayClient is the HTTP one. */
export interface Gateway {
  listTemplates(): Promise<TemplateInfo[]>;
  createSession(
    template: string,
    bots: string[],
    options?: CreateSessionOptions,
  ): Promise<SessionState>;
  getState(token: string): Promise<SessionState>;
  getUtility(token: string, levels: number[]): Promise<UtilityQuote>;
  submitAction(token: string, action: HumanAction): Promise<SessionState>;
  getSummary(token: string): Promise<SessionSummary>;
}

export class GatewayClient implements Gateway {
  private readonly fetchFn: FetchLike;

  constructor(
    readonly baseUrl: string,
    fetchFn?: FetchLike,
  ) {
    this.fetchFn = fetchFn ?? ((input, init) => globalThis.fetch(input, init));
  }

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    let response: Response;
    try {
      response = await this.fetchFn(this.baseUrl + path, init);
    } catch (error) {
      throw new GatewayUnreachableError(String(error));
    }
    let envelope: Envelope<unknown>;
    try {
      envelope = (await response.json()) as Envelope<unknown>;
    } catch (error) {
      throw new GatewayUnreachableError(`malformed response: ${String(error)}`);
    }
    if (!response.ok) {
      const body = (envelope.body ?? {}) as Partial<ErrorBody>;
      throw new GatewayApiError(
        response.status,
        body.code ?? "error",
        body.reason ?? `HTTP ${response.status}`,
      );
    }
    return envelope.body as T;
  }

  private post<T>(path: string, payload: unknown): Promise<T> {
    return this.request<T>(path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(payload),
    });
  }

  async listTemplates(): Promise<TemplateInfo[]> {
    const body = await this.request<{ templates: TemplateInfo[] }>("/v1/templates");
    return body.templates;
  }

  createSession(
    template: string,
    bots: string[],
    options: CreateSessionOptions = {},
  ): Promise<SessionState> {
    return this.post<SessionState>("/v1/sessions", { template, bots, ...options });
  }

  getState(token: string): Promise<SessionState> {
    return this.request<SessionState>(`/v1/sessions/${encodeURIComponent(token)}`);
  }

  getUtility(token: string, levels: number[]): Promise<UtilityQuote> {
    const query = encodeURIComponent(levels.join(","));
    return this.request<UtilityQuote>(
      `/v1/sessions/${encodeURIComponent(token)}/utility?levels=${query}`,
    );
  }

  submitAction(token: string, action: HumanAction): Promise<SessionState> {
    return this.post<SessionState>(`/v1/sessions/${encodeURIComponent(token)}/actions`, action);
  }

  getSummary(token: string): Promise<SessionSummary> {
    return this.request<SessionSummary>(`/v1/sessions/${encodeURIComponent(token)}/summary`);
  }
}
