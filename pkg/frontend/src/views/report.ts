// Report preview and export. The export writes the exact bytes the
// service returned; the client never reformats them.

import { ApiClient } from "../api";
import { clear, el } from "../render";

export type Downloader = (name: string, bytes: Uint8Array) => void;

export function browserDownload(name: string, bytes: Uint8Array): void {
  const blob = new Blob([bytes.buffer as ArrayBuffer], { type: "application/octet-stream" });
  const anchor = document.createElement("a");
  anchor.href = URL.createObjectURL(blob);
  anchor.download = name;
  anchor.click();
  URL.revokeObjectURL(anchor.href);
}

export interface ReportDeps {
  api: ApiClient;
  sessionId: string;
  download?: Downloader;
  onError: (error: unknown, retry: () => void) => void;
}

export function renderReportView(root: HTMLElement, deps: ReportDeps): void {
  clear(root);
  const download = deps.download ?? browserDownload;

  const preview = el("pre", "report-preview");
  preview.setAttribute("data-role", "report-preview");
  const load = () =>
    deps.api
      .reportBytes(deps.sessionId, "text")
      .then((bytes) => {
        preview.textContent = new TextDecoder().decode(bytes);
      })
      .catch((error) => deps.onError(error, load));
  void load();
  root.appendChild(preview);

  const exportButton = el("button", "", "export report (json)");
  exportButton.setAttribute("data-role", "export-report");
  exportButton.addEventListener("click", () => {
    const run = () =>
      deps.api
        .reportBytes(deps.sessionId, "json")
        .then((bytes) => download(`report-${deps.sessionId}.json`, bytes))
        .catch((error) => deps.onError(error, run));
    void run();
  });
  root.appendChild(exportButton);
}
