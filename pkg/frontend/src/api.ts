import type {
  ApiErrorBody,
  CheckReport,
  MatrixPayload,
  OpRecord,
  OpResponse,
} from "./types.js";

export class ServiceError extends Error {
  readonly status: number;
  readonly code: string;
  readonly detail: string | null;

  constructor(status: number, body: ApiErrorBody) {
    super(body.message);
    this.status = status;
    this.code = body.code;
    this.detail = body.detail ?? null;
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

/** Thin typed wrapper over the session HTTP API. */
export class ServiceClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request(path: string, init?: RequestInit): Promise<Response> {
    const response = await this.fetchImpl(`${this.baseUrl}${path}`, init);
    if (!response.ok) {
      let body: ApiErrorBody;
      try {
        body = (await response.json()) as ApiErrorBody;
      } catch {
        body = { code: "http_error", message: `HTTP ${response.status}` };
      }
      throw new ServiceError(response.status, body);
    }
    return response;
  }

  async createSession(pnml: string): Promise<{ id: string } & MatrixPayload> {
    const response = await this.request("/sessions", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ pnml }),
    });
    return (await response.json()) as { id: string } & MatrixPayload;
  }

  async matrixText(sessionId: string): Promise<string> {
    const response = await this.request(`/sessions/${sessionId}/matrix`);
    return response.text();
  }

  async applyOp(sessionId: string, op: OpRecord): Promise<OpResponse> {
    const response = await this.request(`/sessions/${sessionId}/ops`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(op),
    });
    return (await response.json()) as OpResponse;
  }

  async undo(sessionId: string): Promise<{ matrix: MatrixPayload }> {
    const response = await this.request(`/sessions/${sessionId}/undo`, { method: "POST" });
    return (await response.json()) as { matrix: MatrixPayload };
  }

  async scriptText(sessionId: string): Promise<string> {
    const response = await this.request(`/sessions/${sessionId}/script`);
    return response.text();
  }

  async constraintsText(sessionId: string): Promise<string> {
    const response = await this.request(`/sessions/${sessionId}/constraints`);
    return response.text();
  }

  async sqlText(sessionId: string, mode: "paper" | "violation"): Promise<string> {
    const response = await this.request(`/sessions/${sessionId}/sql?mode=${mode}`);
    return response.text();
  }

  async uploadLog(sessionId: string, csv: string): Promise<{ traces: number }> {
    const response = await this.request(`/sessions/${sessionId}/log`, {
      method: "POST",
      headers: { "content-type": "text/csv" },
      body: csv,
    });
    return (await response.json()) as { traces: number };
  }

  async check(sessionId: string, csv?: string): Promise<CheckReport> {
    const response = await this.request(`/sessions/${sessionId}/check`, {
      method: "POST",
      headers: { "content-type": "text/csv" },
      body: csv ?? "",
    });
    return (await response.json()) as CheckReport;
  }
}
