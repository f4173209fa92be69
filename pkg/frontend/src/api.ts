// Typed client over the service HTTP API. Every state change round-trips
// through here; the client performs no computation of its own.

import type {
  ApiError,
  DiagnosisResponse,
  Defect,
  ParetoResponse,
  SessionView,
  UChartResponse,
  VersionSummary,
} from "./types";

export class ServiceError extends Error {
  readonly code: string;
  readonly status: number;
  readonly detail: unknown;

  constructor(status: number, body: ApiError) {
    super(body.message);
    this.code = body.code;
    this.status = status;
    this.detail = body.detail;
  }

  get isConflict(): boolean {
    return this.status === 409;
  }
}

async function request<T>(base: string, path: string, init?: RequestInit): Promise<T> {
  const response = await fetch(base + path, {
    headers: { "content-type": "application/json" },
    ...init,
  });
  if (!response.ok) {
    let body: ApiError;
    try {
      body = (await response.json()) as ApiError;
    } catch {
      body = { code: "http-error", message: response.statusText };
    }
    throw new ServiceError(response.status, body);
  }
  return (await response.json()) as T;
}

export class ApiClient {
  constructor(readonly base: string) {}

  private get<T>(path: string): Promise<T> {
    return request<T>(this.base, path);
  }

  private post<T>(path: string, body: unknown): Promise<T> {
    return request<T>(this.base, path, { method: "POST", body: JSON.stringify(body) });
  }

  listVersions(): Promise<VersionSummary[]> {
    return this.get("/versions");
  }

  listDefects(iteration?: string): Promise<Defect[]> {
    const suffix = iteration ? `?iteration=${encodeURIComponent(iteration)}` : "";
    return this.get(`/defects${suffix}`);
  }

  listIterations(): Promise<{ iteration_id: string }[]> {
    return this.get("/iterations");
  }

  pareto(iteration: string): Promise<ParetoResponse> {
    return this.get(`/analytics/pareto?iteration=${encodeURIComponent(iteration)}`);
  }

  uChart(iteration: string): Promise<UChartResponse> {
    return this.get(`/analytics/uchart?iteration=${encodeURIComponent(iteration)}&by=fp`);
  }

  diagnose(
    versionId: string,
    problemId: string,
    evidence: Record<string, string>,
  ): Promise<DiagnosisResponse> {
    return this.post("/diagnose", {
      version_id: versionId,
      problem_id: problemId,
      evidence,
    });
  }

  createSession(modelVersionId: string): Promise<SessionView> {
    return this.post("/sessions", { model_version_id: modelVersionId });
  }

  getSession(sessionId: string): Promise<SessionView> {
    return this.get(`/sessions/${sessionId}`);
  }

  advance(sessionId: string, toStep: string, revision: number): Promise<SessionView> {
    return this.post(`/sessions/${sessionId}/advance`, { to_step: toStep, revision });
  }

  setSample(sessionId: string, defectIds: string[], revision: number): Promise<SessionView> {
    return this.post(`/sessions/${sessionId}/sample`, {
      defect_ids: defectIds,
      revision,
    });
  }

  addSystematicError(
    sessionId: string,
    body: {
      label: string;
      defect_category: string;
      member_defect_ids: string[];
      iteration_id: string;
    },
    revision: number,
  ): Promise<SessionView> {
    return this.post(`/sessions/${sessionId}/systematic-errors`, { ...body, revision });
  }

  runQuery(
    sessionId: string,
    problemId: string,
    evidence: Record<string, string>,
    revision: number,
  ): Promise<{ session: SessionView; query: { result: DiagnosisResponse } }> {
    return this.post(`/sessions/${sessionId}/queries`, {
      problem_id: problemId,
      evidence,
      revision,
    });
  }

  recordCause(
    sessionId: string,
    body: {
      systematic_error_id: string;
      problem_id: string;
      category_id: string;
      cause_id?: string | null;
      cause_text?: string | null;
      rationale?: string;
    },
    revision: number,
  ): Promise<SessionView> {
    return this.post(`/sessions/${sessionId}/causes`, { ...body, revision });
  }

  proposeAction(
    sessionId: string,
    body: { description: string; linked_cause_ids: string[]; owner?: string },
    revision: number,
  ): Promise<SessionView> {
    return this.post(`/sessions/${sessionId}/actions`, { ...body, revision });
  }

  setActionStatus(
    sessionId: string,
    actionId: string,
    status: string,
    revision: number,
  ): Promise<SessionView> {
    return this.post(`/sessions/${sessionId}/actions/${actionId}/status`, {
      status,
      revision,
    });
  }

  /** Raw report bytes; exports must stay byte-identical to the service body. */
  async reportBytes(sessionId: string, format: "json" | "text" = "json"): Promise<Uint8Array> {
    const response = await fetch(
      `${this.base}/sessions/${sessionId}/report?format=${format}`,
    );
    if (!response.ok) {
      throw new ServiceError(response.status, (await response.json()) as ApiError);
    }
    return new Uint8Array(await response.arrayBuffer());
  }
}
