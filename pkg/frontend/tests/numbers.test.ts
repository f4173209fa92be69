// Contract: every number the client renders is traceable to a service
// response value. The client computes nothing.

import { describe, expect, it } from "vitest";

import { ApiClient } from "../src/api";
import { Store } from "../src/store";
import { renderDiagnosisPanel, refreshDiagnosis } from "../src/views/diagnosis";
import { loadCharts, renderSampleView } from "../src/views/sample";
import {
  FakeService,
  collectNumbers,
  diagnosisResponse,
  paretoResponse,
  uChartResponse,
} from "./helpers";

describe("no client-side numeric computation", () => {
  it("all rendered numbers match service response values", async () => {
    const service = new FakeService();
    const pareto = paretoResponse();
    const uChart = uChartResponse();
    const diagnosis = diagnosisResponse();
    service.on("GET", /^\/analytics\/pareto/, () => ({ body: pareto }));
    service.on("GET", /^\/analytics\/uchart/, () => ({ body: uChart }));
    service.on("POST", /^\/diagnose$/, () => ({ body: diagnosis }));
    service.install();

    const api = new ApiClient("http://svc");
    const store = new Store();
    const root = document.createElement("div");
    const fail = (error: unknown) => {
      throw error;
    };

    await loadCharts({ api, store, onSampleChosen: () => undefined, onError: fail }, "EL3");
    renderSampleView(root, { api, store, onSampleChosen: () => undefined, onError: fail }, [
      {
        id: "EL3-D001", iteration_id: "EL3", unit_id: "EL3-UC01",
        nature: "omission", description: "", detail_tag: null, systematic_error_id: null,
      },
    ]);
    const panel = document.createElement("div");
    const deps = {
      store,
      problems: [{ id: "incomplete_hidden_requirements", label: "P" }],
      diagnose: () => api.diagnose("v-1", "incomplete_hidden_requirements", {}),
      onError: fail,
    };
    store.patchDiagnosis({ selectedProblem: "incomplete_hidden_requirements" });
    await refreshDiagnosis(deps);
    renderDiagnosisPanel(panel, deps);
    root.appendChild(panel);

    const serviceNumbers = collectNumbers({ pareto, uChart, diagnosis });
    const rendered = Array.from(root.querySelectorAll("[data-number]"));
    expect(rendered.length).toBeGreaterThan(10);
    for (const node of rendered) {
      expect(serviceNumbers.has(node.textContent ?? "")).toBe(true);
    }
  });

  it("u-chart flags come from the service, flagged rows highlighted", async () => {
    const service = new FakeService();
    service.on("GET", /^\/analytics\/pareto/, () => ({ body: paretoResponse() }));
    service.on("GET", /^\/analytics\/uchart/, () => ({ body: uChartResponse() }));
    service.install();
    const api = new ApiClient("http://svc");
    const store = new Store();
    const root = document.createElement("div");
    const fail = (error: unknown) => {
      throw error;
    };
    await loadCharts({ api, store, onSampleChosen: () => undefined, onError: fail }, "EL3");
    renderSampleView(root, { api, store, onSampleChosen: () => undefined, onError: fail }, []);
    const flagged = Array.from(root.querySelectorAll("[data-flagged]"));
    expect(flagged.map((node) => node.getAttribute("data-unit"))).toEqual(["EL3-UC04"]);
    const center = root.querySelector(".center-line [data-number]");
    expect(center?.textContent).toBe("0.5144230769230769");
  });
});
