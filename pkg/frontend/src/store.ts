// Minimal pub/sub store holding the cockpit state. Posteriors, limits and
// shares are never computed here; they arrive from the service and are
// stored as-is.

import type {
  DiagnosisResponse,
  EvidenceState,
  ParetoResponse,
  SessionView,
  UChartResponse,
  VersionSummary,
} from "./types";

export interface DiagnosisPanelState {
  selectedProblem: string | null;
  toggles: Record<string, EvidenceState>;
  latest: DiagnosisResponse | null;
  history: DiagnosisResponse[];
  categoryFilter: string | null;
}

export interface AppState {
  versions: VersionSummary[];
  session: SessionView | null;
  pareto: ParetoResponse | null;
  uChart: UChartResponse | null;
  diagnosis: DiagnosisPanelState;
  error: { code: string; message: string; retry: (() => void) | null } | null;
  conflict: boolean;
}

export function initialState(): AppState {
  return {
    versions: [],
    session: null,
    pareto: null,
    uChart: null,
    diagnosis: {
      selectedProblem: null,
      toggles: {},
      latest: null,
      history: [],
      categoryFilter: null,
    },
    error: null,
    conflict: false,
  };
}

type Listener = () => void;

export class Store {
  private state: AppState = initialState();
  private listeners: Listener[] = [];

  get(): AppState {
    return this.state;
  }

  set(patch: Partial<AppState>): void {
    this.state = { ...this.state, ...patch };
    for (const listener of this.listeners) listener();
  }

  patchDiagnosis(patch: Partial<DiagnosisPanelState>): void {
    this.set({ diagnosis: { ...this.state.diagnosis, ...patch } });
  }

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }
}

/** Evidence actually sent to the service: tri-state toggles map to
 * present -> "true", absent -> "false", unknown -> omitted. */
export function evidenceFromToggles(
  toggles: Record<string, EvidenceState>,
): Record<string, string> {
  const evidence: Record<string, string> = {};
  for (const [causeId, state] of Object.entries(toggles)) {
    if (state === "present") evidence[causeId] = "true";
    else if (state === "absent") evidence[causeId] = "false";
  }
  return evidence;
}
