// Systematic-error grouping: drag defects from the sample list into a
// group basket (click-to-add works as the keyboard fallback), then submit
// the group to the service.

import { clear, el } from "../render";
import type { Defect, SessionView } from "../types";

export interface GroupingDeps {
  onCreateGroup: (body: {
    label: string;
    defect_category: string;
    member_defect_ids: string[];
    iteration_id: string;
  }) => void;
}

export function renderGroupingView(
  root: HTMLElement,
  deps: GroupingDeps,
  session: SessionView,
  defects: Defect[],
): void {
  clear(root);
  const sample = new Set(session.sample);
  const pool = defects.filter((d) => sample.has(d.id));
  const basket: string[] = [];

  const basketList = el("ul", "group-basket");
  basketList.setAttribute("data-role", "group-basket");

  const syncBasket = () => {
    clear(basketList);
    for (const id of basket) {
      const item = el("li", "", id);
      item.setAttribute("data-member", id);
      basketList.appendChild(item);
    }
  };

  const addToBasket = (id: string) => {
    if (!basket.includes(id)) {
      basket.push(id);
      syncBasket();
    }
  };

  const list = el("ul", "defect-pool");
  for (const defect of pool) {
    const item = el("li", "", `${defect.id} [${defect.nature}] ${defect.detail_tag ?? ""}`);
    item.setAttribute("draggable", "true");
    item.setAttribute("data-defect", defect.id);
    item.addEventListener("dragstart", (event) => {
      (event as DragEvent).dataTransfer?.setData("text/plain", defect.id);
    });
    item.addEventListener("click", () => addToBasket(defect.id));
    list.appendChild(item);
  }
  root.appendChild(list);

  const dropZone = el("div", "drop-zone", "drop defects here to group them");
  dropZone.setAttribute("data-role", "drop-zone");
  dropZone.addEventListener("dragover", (event) => event.preventDefault());
  dropZone.addEventListener("drop", (event) => {
    event.preventDefault();
    const id = (event as DragEvent).dataTransfer?.getData("text/plain");
    if (id) addToBasket(id);
  });
  root.appendChild(dropZone);
  root.appendChild(basketList);

  const label = document.createElement("input");
  label.setAttribute("data-role", "group-label");
  label.placeholder = "systematic error label";
  root.appendChild(label);

  const category = el("select");
  category.setAttribute("data-role", "group-category");
  for (const nature of [
    "ambiguity",
    "extraneous information",
    "inconsistent information",
    "incorrect fact",
    "omission",
  ]) {
    const option = el("option", "", nature);
    option.setAttribute("value", nature);
    category.appendChild(option);
  }
  root.appendChild(category);

  const submit = el("button", "", "create systematic error");
  submit.setAttribute("data-role", "create-group");
  submit.addEventListener("click", () => {
    const iteration = pool.find((d) => d.id === basket[0])?.iteration_id ?? "";
    deps.onCreateGroup({
      label: label.value,
      defect_category: category.value,
      member_defect_ids: [...basket],
      iteration_id: iteration,
    });
  });
  root.appendChild(submit);

  const existing = el("ul", "existing-groups");
  for (const error of session.systematic_errors) {
    existing.appendChild(
      el("li", "", `${error.label} (${error.member_defect_ids.length} defects)`),
    );
  }
  root.appendChild(existing);
}
