// Cause and action capture forms for the determine-causes and
// develop-actions steps, plus action status tracking.

import { clear, el } from "../render";
import type { SessionView } from "../types";

export interface CauseFormDeps {
  categories: { id: string; label: string }[];
  causes: { id: string; label: string; category_id: string }[];
  onRecordCause: (body: {
    systematic_error_id: string;
    problem_id: string;
    category_id: string;
    cause_id: string | null;
    cause_text: string | null;
    rationale: string;
  }) => void;
}

export function renderCauseForm(
  root: HTMLElement,
  deps: CauseFormDeps,
  session: SessionView,
  problems: { id: string; label: string }[],
): void {
  clear(root);
  const errorPicker = el("select");
  errorPicker.setAttribute("data-role", "cause-error");
  for (const error of session.systematic_errors) {
    const option = el("option", "", error.label);
    option.setAttribute("value", error.id);
    errorPicker.appendChild(option);
  }
  const problemPicker = el("select");
  problemPicker.setAttribute("data-role", "cause-problem");
  for (const problem of problems) {
    const option = el("option", "", problem.label);
    option.setAttribute("value", problem.id);
    problemPicker.appendChild(option);
  }
  const categoryPicker = el("select");
  categoryPicker.setAttribute("data-role", "cause-category");
  for (const category of deps.categories) {
    const option = el("option", "", category.label);
    option.setAttribute("value", category.id);
    categoryPicker.appendChild(option);
  }
  const causePicker = el("select");
  causePicker.setAttribute("data-role", "cause-id");
  const freeText = el("option", "", "(novel cause, free text)");
  freeText.setAttribute("value", "");
  causePicker.appendChild(freeText);
  for (const cause of deps.causes) {
    const option = el("option", "", cause.label);
    option.setAttribute("value", cause.id);
    causePicker.appendChild(option);
  }
  const text = document.createElement("input");
  text.setAttribute("data-role", "cause-text");
  text.placeholder = "free-text cause";
  const rationale = document.createElement("input");
  rationale.setAttribute("data-role", "cause-rationale");
  rationale.placeholder = "rationale";
  const submit = el("button", "", "record cause");
  submit.setAttribute("data-role", "record-cause");
  submit.addEventListener("click", () => {
    deps.onRecordCause({
      systematic_error_id: errorPicker.value,
      problem_id: problemPicker.value,
      category_id: categoryPicker.value,
      cause_id: causePicker.value || null,
      cause_text: causePicker.value ? null : text.value,
      rationale: rationale.value,
    });
  });
  for (const node of [errorPicker, problemPicker, categoryPicker, causePicker,
                      text, rationale, submit]) {
    root.appendChild(node);
  }

  const recorded = el("ul", "determined-causes");
  for (const cause of session.determined_causes) {
    recorded.appendChild(el(
      "li", "",
      `${cause.id}: ${cause.cause_id ?? cause.cause_text} [${cause.category_id}]`,
    ));
  }
  root.appendChild(recorded);
}

export interface ActionFormDeps {
  onProposeAction: (body: { description: string; linked_cause_ids: string[]; owner: string }) => void;
  onStatusChange: (actionId: string, status: string) => void;
}

export function renderActionForm(
  root: HTMLElement,
  deps: ActionFormDeps,
  session: SessionView,
): void {
  clear(root);
  const description = document.createElement("input");
  description.setAttribute("data-role", "action-description");
  description.placeholder = "action proposal";
  const owner = document.createElement("input");
  owner.setAttribute("data-role", "action-owner");
  owner.placeholder = "owner";
  const linked = el("select");
  linked.setAttribute("data-role", "action-cause");
  linked.setAttribute("multiple", "");
  for (const cause of session.determined_causes) {
    const option = el("option", "", `${cause.id}: ${cause.cause_id ?? cause.cause_text}`);
    option.setAttribute("value", cause.id);
    linked.appendChild(option);
  }
  const submit = el("button", "", "propose action");
  submit.setAttribute("data-role", "propose-action");
  submit.addEventListener("click", () => {
    const chosen = Array.from(linked.selectedOptions).map((o) => o.value);
    deps.onProposeAction({
      description: description.value,
      linked_cause_ids: chosen,
      owner: owner.value,
    });
  });
  for (const node of [description, owner, linked, submit]) root.appendChild(node);

  const list = el("ul", "actions");
  for (const action of session.actions) {
    const item = el("li", "", `[${action.status}] ${action.description} `);
    item.setAttribute("data-action", action.id);
    const next = action.status === "proposed" ? "in_progress"
      : action.status === "in_progress" ? "done" : null;
    if (next) {
      const button = el("button", "", `mark ${next}`);
      button.setAttribute("data-role", "action-status");
      button.addEventListener("click", () => deps.onStatusChange(action.id, next));
      item.appendChild(button);
    }
    list.appendChild(item);
  }
  root.appendChild(list);
}
