// Diagnosis panel: problem picker, per-cause tri-state evidence toggles,
// posterior bars per category and cause, category filter, query history.
// Every toggle change issues a diagnose call carrying exactly the evidence
// shown by the toggles; the bars always show the latest service response.

import { el, probabilityBar, clear } from "../render";
import { evidenceFromToggles, Store } from "../store";
import type { DiagnosisResponse, EvidenceState } from "../types";

const TOGGLE_STATES: EvidenceState[] = ["unknown", "present", "absent"];

export interface DiagnosisDeps {
  store: Store;
  problems: { id: string; label: string }[];
  /** Issues the diagnose call (bare endpoint or session query, the caller
   * decides); receives exactly the evidence shown by the toggles. */
  diagnose: (problemId: string, evidence: Record<string, string>) => Promise<DiagnosisResponse>;
  onError: (error: unknown, retry: () => void) => void;
}

export async function refreshDiagnosis(deps: DiagnosisDeps): Promise<void> {
  const { store } = deps;
  const panel = store.get().diagnosis;
  if (!panel.selectedProblem) return;
  const evidence = evidenceFromToggles(panel.toggles);
  const run = () =>
    deps
      .diagnose(panel.selectedProblem!, evidence)
      .then((result) => {
        store.patchDiagnosis({
          latest: result,
          history: [...store.get().diagnosis.history, result],
        });
      })
      .catch((error) => deps.onError(error, run));
  await run();
}

export function renderDiagnosisPanel(root: HTMLElement, deps: DiagnosisDeps): void {
  const { store } = deps;
  clear(root);
  const panel = store.get().diagnosis;

  const picker = el("select", "problem-picker");
  picker.setAttribute("data-role", "problem-picker");
  const placeholder = el("option", "", "select a problem");
  placeholder.setAttribute("value", "");
  picker.appendChild(placeholder);
  for (const problem of deps.problems) {
    const option = el("option", "", problem.label);
    option.setAttribute("value", problem.id);
    if (panel.selectedProblem === problem.id) option.setAttribute("selected", "");
    picker.appendChild(option);
  }
  picker.addEventListener("change", () => {
    store.patchDiagnosis({
      selectedProblem: picker.value || null,
      toggles: {},
      latest: null,
    });
    if (picker.value) void refreshDiagnosis(deps);
  });
  root.appendChild(picker);

  const latest = panel.latest;
  if (!latest) {
    root.appendChild(el("p", "hint", "pick a problem to query the cause model"));
    return;
  }

  const filter = el("select", "category-filter");
  filter.setAttribute("data-role", "category-filter");
  const all = el("option", "", "all categories");
  all.setAttribute("value", "");
  filter.appendChild(all);
  for (const category of latest.categories) {
    const option = el("option", "", category.label);
    option.setAttribute("value", category.category_id);
    if (panel.categoryFilter === category.category_id) option.setAttribute("selected", "");
    filter.appendChild(option);
  }
  filter.addEventListener("change", () => {
    store.patchDiagnosis({ categoryFilter: filter.value || null });
  });
  root.appendChild(filter);

  const list = el("div", "categories");
  for (const category of latest.categories) {
    if (panel.categoryFilter && category.category_id !== panel.categoryFilter) continue;
    const block = el("section", "category");
    block.setAttribute("data-category", category.category_id);
    const heading = el("h3", "", category.label);
    block.appendChild(heading);
    block.appendChild(probabilityBar(category.probability));
    for (const cause of category.causes) {
      const row = el("div", "cause-row");
      row.setAttribute("data-cause", cause.cause_id);
      row.appendChild(el("span", "cause-label", cause.label));
      row.appendChild(probabilityBar(cause.probability));
      row.appendChild(renderToggle(cause.cause_id, deps));
      block.appendChild(row);
    }
    list.appendChild(block);
  }
  root.appendChild(list);

  const history = el("ol", "query-history");
  history.setAttribute("data-role", "query-history");
  for (const entry of store.get().diagnosis.history) {
    const item = el("li");
    const evidence = Object.entries(entry.evidence)
      .map(([k, v]) => `${k}=${v}`)
      .join(", ");
    item.textContent = `${entry.problem_id}: ${evidence || "no evidence"}`;
    history.appendChild(item);
  }
  root.appendChild(history);
}

function renderToggle(causeId: string, deps: DiagnosisDeps): HTMLElement {
  const { store } = deps;
  const current = store.get().diagnosis.toggles[causeId] ?? "unknown";
  const wrap = el("span", "tri-state");
  wrap.setAttribute("data-toggle", causeId);
  for (const state of TOGGLE_STATES) {
    const button = el("button", state === current ? "active" : "", state);
    button.setAttribute("data-state", state);
    button.addEventListener("click", () => {
      const toggles = { ...store.get().diagnosis.toggles };
      if (state === "unknown") delete toggles[causeId];
      else toggles[causeId] = state;
      store.patchDiagnosis({ toggles });
      void refreshDiagnosis(deps);
    });
    wrap.appendChild(button);
  }
  return wrap;
}
