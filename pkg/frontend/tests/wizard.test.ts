// App wiring: advancing steps round-trips through the service, conflicts
// prompt a reload, errors render with a retry affordance, and the session
// query history matches the service ledger after refresh.

import { beforeEach, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api";
import { App } from "../src/main";
import {
  FakeService,
  diagnosisResponse,
  sessionView,
} from "./helpers";
import type { SessionView } from "../src/types";

const MODEL = {
  problems: [{ id: "incomplete_hidden_requirements", label: "Incomplete reqs" }],
  causes: [
    { id: "missing_qualification", label: "Missing qualification" },
    { id: "missing_domain_knowledge", label: "Missing domain knowledge" },
  ],
  cause_categories: [
    { id: "people", label: "people",
      members: ["missing_qualification", "missing_domain_knowledge"] },
  ],
};

function installBaseRoutes(service: FakeService, session: { view: SessionView }) {
  service.on("GET", /^\/versions\/v-1\?include_model=true$/, () => ({
    body: { id: "v-1", model: MODEL },
  }));
  service.on("GET", /^\/defects$/, () => ({
    body: [
      { id: "d1", iteration_id: "EL3", unit_id: "u1", nature: "omission",
        description: "", detail_tag: null, systematic_error_id: null },
      { id: "d2", iteration_id: "EL3", unit_id: "u1", nature: "omission",
        description: "", detail_tag: null, systematic_error_id: null },
    ],
  }));
  service.on("POST", /^\/sessions$/, () => ({ body: session.view }));
  service.on("GET", /^\/sessions\/s-1$/, () => ({ body: session.view }));
}

describe("app wiring", () => {
  let service: FakeService;
  let session: { view: SessionView };

  beforeEach(() => {
    service = new FakeService();
    session = { view: sessionView() };
    installBaseRoutes(service, session);
    service.install();
  });

  async function startApp(): Promise<App> {
    const app = new App(new ApiClient("http://svc"), document.createElement("div"), "v-1");
    await app.start();
    return app;
  }

  it("advance posts the step and revision, then renders the new session", async () => {
    service.on("POST", /^\/sessions\/s-1\/advance$/, (request) => {
      const body = request.body as { to_step: string; revision: number };
      session.view = { ...session.view, step: body.to_step as SessionView["step"],
                       revision: body.revision + 1 };
      return { body: session.view };
    });
    const app = await startApp();
    session.view = { ...session.view, sample: ["d1"], revision: 1 };
    app.store.set({ session: session.view });

    const classify = app.root.querySelector('[data-step="classify"]') as HTMLButtonElement;
    classify.click();
    await new Promise((resolve) => setTimeout(resolve, 0));

    const advances = service.ofPath(/\/advance$/);
    expect(advances).toHaveLength(1);
    expect(advances[0].body).toEqual({ to_step: "classify", revision: 1 });
    expect(app.store.get().session?.step).toBe("classify");
  });

  it("409 conflicts surface a reload prompt that refetches the session", async () => {
    service.on("POST", /^\/sessions\/s-1\/advance$/, () => ({
      status: 409,
      body: { code: "conflict", message: "stale revision" },
    }));
    const app = await startApp();
    session.view = { ...session.view, sample: ["d1"] };
    app.store.set({ session: session.view });

    (app.root.querySelector('[data-step="classify"]') as HTMLButtonElement).click();
    await new Promise((resolve) => setTimeout(resolve, 0));
    expect(app.store.get().conflict).toBe(true);
    const reload = app.root.querySelector('[data-role="reload-session"]') as HTMLButtonElement;
    expect(reload).toBeTruthy();

    session.view = { ...session.view, step: "classify", revision: 7 };
    reload.click();
    await new Promise((resolve) => setTimeout(resolve, 0));
    expect(app.store.get().conflict).toBe(false);
    expect(app.store.get().session?.revision).toBe(7);
  });

  it("service errors render with a retry affordance that re-issues the call", async () => {
    let failures = 1;
    service.on("POST", /^\/sessions\/s-1\/sample$/, (request) => {
      if (failures > 0) {
        failures -= 1;
        return { status: 400, body: { code: "validation", message: "nope" } };
      }
      const body = request.body as { defect_ids: string[]; revision: number };
      session.view = { ...session.view, sample: body.defect_ids,
                       revision: body.revision + 1 };
      return { body: session.view };
    });
    const app = await startApp();

    (app.root.querySelector('[data-role="choose-sample"]') as HTMLButtonElement).click();
    await new Promise((resolve) => setTimeout(resolve, 0));
    const banner = app.root.querySelector('[data-role="error-banner"]');
    expect(banner?.textContent).toContain("validation");

    (app.root.querySelector('[data-role="retry"]') as HTMLButtonElement).click();
    await new Promise((resolve) => setTimeout(resolve, 0));
    expect(app.store.get().error).toBeNull();
    expect(app.store.get().session?.sample).toEqual(["d1", "d2"]);
    expect(service.ofPath(/\/sample$/)).toHaveLength(2);
  });

  it("session queries keep the panel history in sync with the ledger", async () => {
    service.on("POST", /^\/sessions\/s-1\/queries$/, (request) => {
      const body = request.body as { problem_id: string; evidence: Record<string, string>;
                                     revision: number };
      const result = diagnosisResponse({ evidence: body.evidence });
      session.view = {
        ...session.view,
        revision: body.revision + 1,
        queries: [
          ...session.view.queries,
          { problem_id: body.problem_id,
            evidence: Object.entries(body.evidence) as [string, string][],
            result, timestamp: "t" },
        ],
      };
      return { body: { session: session.view, query: { result } } };
    });
    const app = await startApp();
    session.view = {
      ...session.view, step: "determine_causes", sample: ["d1"],
      systematic_errors: [{ id: "se-1", label: "err", defect_category: "omission",
                            member_defect_ids: ["d1"], iteration_id: "EL3", warnings: [] }],
      revision: 4,
    };
    app.store.set({ session: session.view });

    const picker = app.root.querySelector('[data-role="problem-picker"]') as HTMLSelectElement;
    picker.value = "incomplete_hidden_requirements";
    picker.dispatchEvent(new Event("change"));
    await new Promise((resolve) => setTimeout(resolve, 0));

    // toggle to absent issues a second, session-scoped query
    const toggle = app.root.querySelector(
      '[data-toggle="missing_qualification"] [data-state="absent"]',
    ) as HTMLButtonElement;
    toggle.click();
    await new Promise((resolve) => setTimeout(resolve, 0));

    const queries = service.ofPath(/\/queries$/);
    expect(queries).toHaveLength(2);
    expect((queries[1].body as { evidence: unknown }).evidence).toEqual({
      missing_qualification: "false",
    });
    // panel history matches the session's evidence ledger after refresh
    const ledger = app.store.get().session?.queries ?? [];
    const history = app.store.get().diagnosis.history;
    expect(history).toHaveLength(ledger.length);
    history.forEach((entry, index) => {
      expect(entry.evidence).toEqual(Object.fromEntries(ledger[index].evidence));
    });
  });
});
