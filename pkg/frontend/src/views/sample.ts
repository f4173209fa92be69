// Sample step: defect list with selection, plus the U-chart and Pareto
// views for the chosen iteration. Control limits, rates, shares and the
// center line all come from the analytics endpoints untouched; flagged
// units are highlighted.

import { ApiClient } from "../api";
import { clear, el, renderNumber } from "../render";
import { Store } from "../store";
import type { Defect } from "../types";

export interface SampleDeps {
  api: ApiClient;
  store: Store;
  onSampleChosen: (defectIds: string[]) => void;
  onError: (error: unknown, retry: () => void) => void;
}

export async function loadCharts(deps: SampleDeps, iteration: string): Promise<void> {
  const run = () =>
    Promise.all([deps.api.pareto(iteration), deps.api.uChart(iteration)])
      .then(([pareto, uChart]) => deps.store.set({ pareto, uChart }))
      .catch((error) => deps.onError(error, run));
  await run();
}

export function renderSampleView(
  root: HTMLElement,
  deps: SampleDeps,
  defects: Defect[],
): void {
  clear(root);
  const { store } = deps;

  const table = el("table", "defect-table");
  const head = el("tr");
  for (const title of ["", "id", "unit", "nature", "detail", "description"]) {
    head.appendChild(el("th", "", title));
  }
  table.appendChild(head);
  const checkboxes: { id: string; box: HTMLInputElement }[] = [];
  for (const defect of defects) {
    const row = el("tr");
    row.setAttribute("data-defect", defect.id);
    const cell = el("td");
    const box = document.createElement("input");
    box.type = "checkbox";
    box.checked = true;
    checkboxes.push({ id: defect.id, box });
    cell.appendChild(box);
    row.appendChild(cell);
    row.appendChild(el("td", "", defect.id));
    row.appendChild(el("td", "", defect.unit_id));
    row.appendChild(el("td", "", defect.nature));
    row.appendChild(el("td", "", defect.detail_tag ?? ""));
    row.appendChild(el("td", "", defect.description));
    table.appendChild(row);
  }
  root.appendChild(table);

  const choose = el("button", "choose-sample", "use selected defects as sample");
  choose.setAttribute("data-role", "choose-sample");
  choose.addEventListener("click", () => {
    deps.onSampleChosen(checkboxes.filter((c) => c.box.checked).map((c) => c.id));
  });
  root.appendChild(choose);

  const uChart = store.get().uChart;
  if (uChart) {
    const section = el("section", "u-chart");
    section.setAttribute("data-role", "u-chart");
    const caption = el("p", "center-line");
    caption.appendChild(el("span", "", `center line (defects per ${uChart.unit_kind}): `));
    caption.appendChild(renderNumber("span", uChart.center_line));
    section.appendChild(caption);
    const chart = el("table");
    const header = el("tr");
    for (const title of ["unit", "size", "defects", "rate", "lcl", "ucl"]) {
      header.appendChild(el("th", "", title));
    }
    chart.appendChild(header);
    for (const point of uChart.points) {
      const row = el("tr", point.flagged ? "flagged" : "");
      row.setAttribute("data-unit", point.unit_id);
      if (point.flagged) row.setAttribute("data-flagged", "true");
      row.appendChild(el("td", "", point.unit_id));
      const cells = [point.size, point.defect_count, point.rate, point.lcl, point.ucl];
      for (const value of cells) {
        const cell = el("td");
        cell.appendChild(renderNumber("span", value));
        row.appendChild(cell);
      }
      chart.appendChild(row);
    }
    section.appendChild(chart);
    root.appendChild(section);
  }

  const pareto = store.get().pareto;
  if (pareto) {
    const section = el("section", "pareto");
    section.setAttribute("data-role", "pareto");
    const chart = el("table");
    const header = el("tr");
    for (const title of ["nature", "count", "share", "cumulative"]) {
      header.appendChild(el("th", "", title));
    }
    chart.appendChild(header);
    for (const entry of pareto.entries) {
      const row = el("tr");
      row.setAttribute("data-nature", entry.category);
      row.appendChild(el("td", "", entry.category));
      for (const value of [entry.count, entry.share, entry.cumulative_share]) {
        const cell = el("td");
        cell.appendChild(renderNumber("span", value));
        row.appendChild(cell);
      }
      chart.appendChild(row);
    }
    section.appendChild(chart);
    const total = el("p");
    total.appendChild(el("span", "", "total: "));
    total.appendChild(renderNumber("span", pareto.total));
    section.appendChild(total);
    root.appendChild(section);
  }
}
