// Step navigation mirroring the session's six-step lifecycle. The active
// step always comes from the service's session document; navigation
// buttons just issue advance calls and render whatever comes back.

import { clear, el } from "../render";
import type { SessionView, StepName } from "../types";
import { STEP_ORDER } from "../types";

const STEP_TITLES: Record<StepName, string> = {
  select_sample: "Select sample",
  classify: "Classify defects",
  identify_systematic_errors: "Identify systematic errors",
  determine_causes: "Determine causes",
  develop_actions: "Develop actions",
  document: "Document results",
};

export interface WizardDeps {
  onAdvance: (toStep: StepName) => void;
  renderStep: (content: HTMLElement, step: StepName) => void;
}

export function renderWizard(root: HTMLElement, deps: WizardDeps, session: SessionView): void {
  clear(root);
  const nav = el("nav", "wizard-nav");
  const currentIndex = STEP_ORDER.indexOf(session.step);
  STEP_ORDER.forEach((step, index) => {
    const button = el("button", index === currentIndex ? "active" : "",
                      `${index + 1}. ${STEP_TITLES[step]}`);
    button.setAttribute("data-step", step);
    // backward is always allowed; forward only to the next step
    if (index > currentIndex + 1) button.setAttribute("disabled", "");
    button.addEventListener("click", () => {
      if (step !== session.step) deps.onAdvance(step);
    });
    nav.appendChild(button);
  });
  root.appendChild(nav);

  const content = el("section", "wizard-content");
  content.setAttribute("data-role", "step-content");
  deps.renderStep(content, session.step);
  root.appendChild(content);
}
