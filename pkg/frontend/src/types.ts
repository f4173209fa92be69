// Shapes of the service API bodies the client consumes. The client never
// derives numbers from these; it renders them as delivered.

export interface ApiError {
  code: string;
  message: string;
  detail?: unknown;
}

export interface CauseDiagnosis {
  cause_id: string;
  label: string;
  probability: number;
}

export interface CategoryDiagnosis {
  category_id: string;
  label: string;
  probability: number;
  causes: CauseDiagnosis[];
}

export interface DiagnosisResponse {
  problem_id: string;
  evidence: Record<string, string>;
  categories: CategoryDiagnosis[];
}

export interface ParetoEntry {
  category: string;
  count: number;
  share: number;
  cumulative_share: number;
}

export interface ParetoResponse {
  total: number;
  entries: ParetoEntry[];
}

export interface UChartPoint {
  unit_id: string;
  size: number;
  defect_count: number;
  rate: number;
  ucl: number;
  lcl: number;
  flagged: boolean;
}

export interface UChartResponse {
  center_line: number;
  unit_kind: string;
  points: UChartPoint[];
}

export interface Defect {
  id: string;
  iteration_id: string;
  unit_id: string;
  nature: string;
  description: string;
  detail_tag: string | null;
  systematic_error_id: string | null;
}

export interface SystematicErrorView {
  id: string;
  label: string;
  defect_category: string;
  member_defect_ids: string[];
  iteration_id: string;
  warnings: string[];
}

export interface QueryView {
  problem_id: string;
  evidence: [string, string][];
  result: DiagnosisResponse;
  timestamp: string;
}

export interface DeterminedCauseView {
  id: string;
  systematic_error_id: string;
  problem_id: string;
  category_id: string;
  cause_id: string | null;
  cause_text: string | null;
  rationale: string;
}

export interface ActionView {
  id: string;
  linked_cause_ids: string[];
  description: string;
  owner: string;
  status: string;
}

export type StepName =
  | "select_sample"
  | "classify"
  | "identify_systematic_errors"
  | "determine_causes"
  | "develop_actions"
  | "document";

export const STEP_ORDER: StepName[] = [
  "select_sample",
  "classify",
  "identify_systematic_errors",
  "determine_causes",
  "develop_actions",
  "document",
];

export interface SessionView {
  id: string;
  created_at: string;
  model_version_id: string;
  step: StepName;
  sample: string[];
  systematic_errors: SystematicErrorView[];
  queries: QueryView[];
  determined_causes: DeterminedCauseView[];
  actions: ActionView[];
  revision: number;
}

export interface VersionSummary {
  id: string;
  parent_id: string | null;
  created_at: string;
  model_version: string;
  trained: boolean;
}

export type EvidenceState = "unknown" | "present" | "absent";
