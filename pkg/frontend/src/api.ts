// Typed client for the chronotate HTTP API. Expected domain outcomes
// (diagnostics, conflicts) come back as values, not exceptions; only
// transport failures and unexpected statuses throw.

import type {
  AnnotationDocument,
  AnnotationRecord,
  Diagnostic,
  ProjectInfo,
  TimelinePayload,
} from "./types.js";

export class NetworkError extends Error {
  constructor(cause: unknown) {
    super(`server unreachable: ${cause}`);
  }
}

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly code: string,
    message: string,
  ) {
    super(message);
  }
}

export type CheckResult = { diagnostics: Diagnostic[] };

export type AnnotateResult =
  | { kind: "ok"; document: AnnotationDocument }
  | { kind: "in_progress" }
  | { kind: "diagnostics"; diagnostics: Diagnostic[] };

export interface QueryRequest {
  relation: string;
  concept?: string;
  start_ms?: number;
  end_ms?: number;
  concept_b?: string;
}

export type QueryResponse =
  | { annotations: AnnotationRecord[] }
  | { pairs: [AnnotationRecord, AnnotationRecord][] };

type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export function parseAnnotationDocument(text: string): AnnotationDocument {
  const lines = text.split("\n").filter((line) => line.trim() !== "");
  if (lines.length === 0) {
    return { header: {}, records: [] };
  }
  const header = JSON.parse(lines[0]!) as Record<string, unknown>;
  const records = lines.slice(1).map((line) => JSON.parse(line) as AnnotationRecord);
  return { header, records };
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string = "",
    private readonly token: string | null = null,
    private readonly fetchFn: FetchLike = (url, init) => globalThis.fetch(url, init),
  ) {}

  private async request(path: string, init: RequestInit = {}): Promise<Response> {
    const headers: Record<string, string> = {
      ...(init.body !== undefined ? { "Content-Type": "application/json" } : {}),
      ...(this.token !== null ? { Authorization: `Bearer ${this.token}` } : {}),
    };
    try {
      return await this.fetchFn(this.baseUrl + path, { ...init, headers });
    } catch (cause) {
      throw new NetworkError(cause);
    }
  }

  private async fail(response: Response): Promise<never> {
    let code = "internal_error";
    let message = `unexpected status ${response.status}`;
    try {
      const body = (await response.json()) as { error?: { code: string; message: string } };
      if (body.error) {
        code = body.error.code;
        message = body.error.message;
      }
    } catch {
      // non-JSON error body; keep the defaults
    }
    throw new ApiError(response.status, code, message);
  }

  async getProject(projectId: string): Promise<ProjectInfo> {
    const response = await this.request(`/projects/${projectId}`);
    if (!response.ok) await this.fail(response);
    return (await response.json()) as ProjectInfo;
  }

  async getRules(projectId: string): Promise<string> {
    const response = await this.request(`/projects/${projectId}/rules`);
    if (!response.ok) await this.fail(response);
    const body = (await response.json()) as { text: string };
    return body.text;
  }

  async putRules(projectId: string, text: string): Promise<void> {
    const response = await this.request(`/projects/${projectId}/rules`, {
      method: "PUT",
      body: JSON.stringify({ text }),
    });
    if (!response.ok) await this.fail(response);
  }

  async checkRules(projectId: string, text: string): Promise<CheckResult> {
    const response = await this.request(`/projects/${projectId}/rules:check`, {
      method: "POST",
      body: JSON.stringify({ text }),
    });
    if (response.status === 200 || response.status === 422) {
      return (await response.json()) as CheckResult;
    }
    return this.fail(response);
  }

  async annotate(projectId: string): Promise<AnnotateResult> {
    const response = await this.request(`/projects/${projectId}/annotate`, {
      method: "POST",
    });
    if (response.status === 200) {
      return { kind: "ok", document: parseAnnotationDocument(await response.text()) };
    }
    if (response.status === 409) {
      return { kind: "in_progress" };
    }
    if (response.status === 422) {
      const body = (await response.json()) as CheckResult;
      return { kind: "diagnostics", diagnostics: body.diagnostics };
    }
    return this.fail(response);
  }

  async getAnnotations(projectId: string): Promise<AnnotationRecord[]> {
    const response = await this.request(`/projects/${projectId}/annotations`);
    if (response.status === 404) {
      return [];
    }
    if (!response.ok) await this.fail(response);
    return parseAnnotationDocument(await response.text()).records;
  }

  async getTimeline(projectId: string): Promise<TimelinePayload> {
    const response = await this.request(`/projects/${projectId}/timeline`);
    if (!response.ok) await this.fail(response);
    return (await response.json()) as TimelinePayload;
  }

  async query(projectId: string, body: QueryRequest): Promise<QueryResponse> {
    const response = await this.request(`/projects/${projectId}/query`, {
      method: "POST",
      body: JSON.stringify(body),
    });
    if (!response.ok) await this.fail(response);
    return (await response.json()) as QueryResponse;
  }
}
