// Cockpit wiring: one session against one trained model version. All
// state changes round-trip through the service; errors render with a
// retry affordance and write conflicts prompt a reload.

import { ApiClient, ServiceError } from "./api";
import { clear, el } from "./render";
import { Store } from "./store";
import type { Defect, SessionView, StepName } from "./types";
import { renderCauseForm, renderActionForm } from "./views/causes";
import { renderDiagnosisPanel } from "./views/diagnosis";
import { renderGroupingView } from "./views/grouping";
import { renderReportView } from "./views/report";
import { loadCharts, renderSampleView } from "./views/sample";
import { renderWizard } from "./views/wizard";

interface ModelDocument {
  problems: { id: string; label: string }[];
  causes: { id: string; label: string }[];
  cause_categories: { id: string; label: string; members: string[] }[];
}

export class App {
  readonly store = new Store();
  private defects: Defect[] = [];
  private model: ModelDocument | null = null;

  constructor(
    readonly api: ApiClient,
    readonly root: HTMLElement,
    readonly versionId: string,
  ) {}

  private get session(): SessionView {
    const session = this.store.get().session;
    if (!session) throw new Error("no session loaded");
    return session;
  }

  async start(sessionId?: string): Promise<void> {
    const versionDoc = await fetchVersion(this.api, this.versionId);
    this.model = versionDoc.model;
    const session = sessionId
      ? await this.api.getSession(sessionId)
      : await this.api.createSession(this.versionId);
    this.defects = await this.api.listDefects();
    this.store.subscribe(() => this.render());
    this.store.set({ session });
  }

  private surfaceError = (error: unknown, retry: () => void): void => {
    if (error instanceof ServiceError && error.isConflict) {
      this.store.set({ conflict: true });
      return;
    }
    const code = error instanceof ServiceError ? error.code : "error";
    const message = error instanceof Error ? error.message : String(error);
    this.store.set({ error: { code, message, retry } });
  };

  /** Wraps a session mutation; on success the fresh session document
   * replaces local state, on conflict the reload banner appears. */
  private mutate(fn: (session: SessionView) => Promise<SessionView>): void {
    const session = this.session;
    const run = () =>
      fn(session)
        .then((updated) => this.store.set({ session: updated, error: null }))
        .catch((error) => this.surfaceError(error, run));
    void run();
  }

  reloadSession(): void {
    const run = () =>
      this.api
        .getSession(this.session.id)
        .then((session) => this.store.set({ session, conflict: false, error: null }))
        .catch((error) => this.surfaceError(error, run));
    void run();
  }

  render(): void {
    const state = this.store.get();
    const session = state.session;
    clear(this.root);

    if (state.conflict) {
      const banner = el("div", "conflict-banner",
                        "this session changed elsewhere - reload to continue");
      const reload = el("button", "", "reload session");
      reload.setAttribute("data-role", "reload-session");
      reload.addEventListener("click", () => this.reloadSession());
      banner.appendChild(reload);
      this.root.appendChild(banner);
    }
    if (state.error) {
      const banner = el("div", "error-banner",
                        `${state.error.code}: ${state.error.message} `);
      banner.setAttribute("data-role", "error-banner");
      if (state.error.retry) {
        const retry = el("button", "", "retry");
        retry.setAttribute("data-role", "retry");
        const retryFn = state.error.retry;
        retry.addEventListener("click", () => {
          this.store.set({ error: null });
          retryFn();
        });
        banner.appendChild(retry);
      }
      this.root.appendChild(banner);
    }
    if (!session) return;

    const wizardRoot = el("div", "wizard");
    renderWizard(wizardRoot, {
      onAdvance: (toStep) =>
        this.mutate((s) => this.api.advance(s.id, toStep, s.revision)),
      renderStep: (content, step) => this.renderStep(content, step),
    }, session);
    this.root.appendChild(wizardRoot);
  }

  private renderStep(content: HTMLElement, step: StepName): void {
    const session = this.session;
    const model = this.model;
    if (!model) return;
    if (step === "select_sample" || step === "classify") {
      renderSampleView(content, {
        api: this.api,
        store: this.store,
        onSampleChosen: (ids) =>
          this.mutate((s) => this.api.setSample(s.id, ids, s.revision)),
        onError: this.surfaceError,
      }, this.defects);
      return;
    }
    if (step === "identify_systematic_errors") {
      renderGroupingView(content, {
        onCreateGroup: (body) =>
          this.mutate((s) => this.api.addSystematicError(s.id, body, s.revision)),
      }, session, this.defects);
      return;
    }
    if (step === "determine_causes") {
      const panel = el("div", "diagnosis-panel");
      renderDiagnosisPanel(panel, {
        store: this.store,
        problems: model.problems,
        diagnose: (problemId, evidence) =>
          this.api
            .runQuery(session.id, problemId, evidence, this.session.revision)
            .then((body) => {
              this.store.set({ session: body.session });
              return body.query.result;
            }),
        onError: this.surfaceError,
      });
      content.appendChild(panel);
      const form = el("div", "cause-form");
      renderCauseForm(form, {
        categories: model.cause_categories,
        causes: model.causes.map((cause) => ({
          ...cause,
          category_id: model.cause_categories
            .find((cat) => cat.members.includes(cause.id))?.id ?? "",
        })),
        onRecordCause: (body) =>
          this.mutate((s) => this.api.recordCause(s.id, body, s.revision)),
      }, session, model.problems);
      content.appendChild(form);
      return;
    }
    if (step === "develop_actions") {
      renderActionForm(content, {
        onProposeAction: (body) =>
          this.mutate((s) => this.api.proposeAction(s.id, body, s.revision)),
        onStatusChange: (actionId, status) =>
          this.mutate((s) => this.api.setActionStatus(s.id, actionId, status, s.revision)),
      }, session);
      return;
    }
    renderReportView(content, {
      api: this.api,
      sessionId: session.id,
      onError: this.surfaceError,
    });
  }

  async loadChartsFor(iteration: string): Promise<void> {
    await loadCharts({
      api: this.api,
      store: this.store,
      onSampleChosen: () => undefined,
      onError: this.surfaceError,
    }, iteration);
  }
}

async function fetchVersion(
  api: ApiClient,
  versionId: string,
): Promise<{ model: ModelDocument }> {
  const response = await fetch(`${api.base}/versions/${versionId}?include_model=true`);
  if (!response.ok) throw new Error(`failed to load version ${versionId}`);
  return (await response.json()) as { model: ModelDocument };
}

export async function boot(base: string, root: HTMLElement): Promise<App | null> {
  const api = new ApiClient(base);
  const versions = await api.listVersions();
  const trained = versions.filter((v) => v.trained);
  if (trained.length === 0) {
    root.textContent = "no trained model version on the service yet";
    return null;
  }
  const app = new App(api, root, trained[trained.length - 1].id);
  await app.start();
  return app;
}
