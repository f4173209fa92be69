// Fake service: replaces fetch, records every request, answers with
// canned bodies in the service's wire shapes.

import type {
  DiagnosisResponse,
  ParetoResponse,
  SessionView,
  UChartResponse,
} from "../src/types";

export interface RecordedRequest {
  method: string;
  path: string;
  body: unknown;
}

type Responder = (request: RecordedRequest) => { status?: number; body: unknown } | Uint8Array;

export class FakeService {
  requests: RecordedRequest[] = [];
  private routes: { method: string; pattern: RegExp; respond: Responder }[] = [];

  on(method: string, pattern: RegExp, respond: Responder): void {
    this.routes.push({ method, pattern, respond });
  }

  install(): void {
    globalThis.fetch = (async (input: RequestInfo | URL, init?: RequestInit) => {
      const url = String(input);
      const path = url.replace(/^https?:\/\/[^/]+/, "");
      const method = init?.method ?? "GET";
      const body = init?.body ? JSON.parse(String(init.body)) : null;
      const request: RecordedRequest = { method, path, body };
      this.requests.push(request);
      for (const route of this.routes) {
        if (route.method === method && route.pattern.test(path)) {
          const result = route.respond(request);
          if (result instanceof Uint8Array) {
            return new Response(result.slice().buffer as ArrayBuffer, { status: 200 });
          }
          return new Response(JSON.stringify(result.body), {
            status: result.status ?? 200,
            headers: { "content-type": "application/json" },
          });
        }
      }
      return new Response(JSON.stringify({ code: "not-found", message: `no route ${path}` }), {
        status: 404,
        headers: { "content-type": "application/json" },
      });
    }) as typeof fetch;
  }

  ofPath(pattern: RegExp): RecordedRequest[] {
    return this.requests.filter((r) => pattern.test(r.path));
  }
}

export function diagnosisResponse(
  overrides: Partial<DiagnosisResponse> = {},
): DiagnosisResponse {
  return {
    problem_id: "incomplete_hidden_requirements",
    evidence: {},
    categories: [
      {
        category_id: "people",
        label: "people",
        probability: 0.6029384716238,
        causes: [
          { cause_id: "missing_qualification", label: "Missing qualification", probability: 0.39871236 },
          { cause_id: "missing_domain_knowledge", label: "Missing domain knowledge", probability: 0.0779412 },
        ],
      },
      {
        category_id: "input",
        label: "input",
        probability: 0.44412345,
        causes: [
          { cause_id: "missing_customer_engagement", label: "Missing engagement", probability: 0.3521 },
        ],
      },
    ],
    ...overrides,
  };
}

export function sessionView(overrides: Partial<SessionView> = {}): SessionView {
  return {
    id: "s-1",
    created_at: "2016-03-14T00:00:00+00:00",
    model_version_id: "v-1",
    step: "select_sample",
    sample: [],
    systematic_errors: [],
    queries: [],
    determined_causes: [],
    actions: [],
    revision: 0,
    ...overrides,
  };
}

export function paretoResponse(): ParetoResponse {
  return {
    total: 214,
    entries: [
      { category: "omission", count: 76, share: 0.35514018691588783, cumulative_share: 0.35514018691588783 },
      { category: "incorrect fact", count: 46, share: 0.21495327102803738, cumulative_share: 0.5700934579439252 },
    ],
  };
}

export function uChartResponse(): UChartResponse {
  return {
    center_line: 0.5144230769230769,
    unit_kind: "fp",
    points: [
      { unit_id: "EL3-UC01", size: 9, defect_count: 5, rate: 0.5555555555555556,
        ucl: 1.2316559666123484, lcl: 0, flagged: false },
      { unit_id: "EL3-UC04", size: 10, defect_count: 13, rate: 1.3,
        ucl: 1.1948529709899255, lcl: 0, flagged: true },
    ],
  };
}

export function collectNumbers(value: unknown, out = new Set<string>()): Set<string> {
  if (typeof value === "number") out.add(String(value));
  else if (Array.isArray(value)) value.forEach((v) => collectNumbers(v, out));
  else if (value && typeof value === "object") {
    Object.values(value).forEach((v) => collectNumbers(v, out));
  }
  return out;
}
