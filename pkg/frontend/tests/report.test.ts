// Report export must hand over the exact bytes the service returned.

import { describe, expect, it } from "vitest";

import { ApiClient } from "../src/api";
import { renderReportView } from "../src/views/report";
import { FakeService } from "./helpers";

describe("report view", () => {
  it("exported document is byte-identical to the service body", async () => {
    const service = new FakeService();
    const reportBytes = new TextEncoder().encode(
      '{\n  "format": "dcaw-report",\n  "version": 1,\n  "session": {"id": "s-1"}\n}\n',
    );
    const textBytes = new TextEncoder().encode("Analysis session s-1\n====\n");
    service.on("GET", /\/report\?format=json$/, () => reportBytes);
    service.on("GET", /\/report\?format=text$/, () => textBytes);
    service.install();

    const api = new ApiClient("http://svc");
    const root = document.createElement("div");
    const downloads: { name: string; bytes: Uint8Array }[] = [];
    renderReportView(root, {
      api,
      sessionId: "s-1",
      download: (name, bytes) => downloads.push({ name, bytes }),
      onError: (error) => {
        throw error;
      },
    });
    await new Promise((resolve) => setTimeout(resolve, 0));

    // preview shows the text rendering
    const preview = root.querySelector('[data-role="report-preview"]');
    expect(preview?.textContent).toContain("Analysis session s-1");

    (root.querySelector('[data-role="export-report"]') as HTMLButtonElement).click();
    await new Promise((resolve) => setTimeout(resolve, 0));
    expect(downloads).toHaveLength(1);
    expect(downloads[0].name).toBe("report-s-1.json");
    expect(Array.from(downloads[0].bytes)).toEqual(Array.from(reportBytes));
  });
});
