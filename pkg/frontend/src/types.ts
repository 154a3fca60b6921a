// Wire contracts of the JSON API. Field names and shapes mirror the
// service responses exactly; the contract tests pin them against fixtures
// recorded from a live instance.

export type AttributeRef = {
  dimension: string;
  attribute: string;
};

export type NamedRef = {
  id: string;
  label: string;
  predefined: boolean;
};

export type WarningItem = {
  uin: string;
  audience: string;
  severity: number;
};

export type WarningMessage = {
  post_id: string;
  items: WarningItem[];
};

export type ComposeRequest = {
  user_id: string;
  text: string;
  declared_audience: string;
  annotations?: string[];
};

export type ComposeResponse = {
  post_id: string;
  status: 'pending' | 'published';
  warning: WarningMessage;
};

export type DecisionResponse = {
  status: 'published' | 'retracted';
  phi: number;
};

export type DeleteResponse = {
  prompt_incident_report: boolean;
  detected_sas: AttributeRef[];
};

// The one-time regret dialog. A regretted report carries all three detail
// fields; a non-regretted one carries none of them.
export type IncidentReportRequest =
  | { post_id: string; regretted: false }
  | {
      post_id: string;
      regretted: true;
      uin: string;
      unintended_audience: string;
      consequence_level: string;
    };

export type MatchOutcome = {
  ph_id: string;
  mode: 'exact' | 'new-incident' | 'absorbing';
  created: boolean;
};

export type ReportResponse = {
  matches: MatchOutcome[];
};

export type RiskStats = {
  point: number;
  variance: number;
  std_dev: number;
  ci_lower: number;
  ci_upper: number;
  alpha: number;
  n: number;
};

export type HeuristicCell = {
  uin: NamedRef;
  counts: number[];
  risk: RiskStats;
};

export type Heuristic = {
  id: string;
  sas: AttributeRef[];
  audience: NamedRef;
  uins: NamedRef[];
  cells: HeuristicCell[];
};

export type HeuristicsResponse = {
  heuristics: Heuristic[];
};

export type Vocabulary = {
  attributes: AttributeRef[];
  audiences: NamedRef[];
  incidents: NamedRef[];
  consequence_levels: string[];
};

export type ThresholdResponse = {
  user_id: string;
  phi: number;
  delta: number;
  tau: number;
  phi_min: number;
  phi_max: number;
  accepted: number;
  ignored: number;
  decisions_in_window: number;
};

export type ApiErrorBody = {
  error: string;
};
