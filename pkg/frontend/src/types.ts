// Wire types of the query service. Field names mirror the server
// responses one-to-one; the UI never computes probabilities itself.

export interface VariableDescription {
  id: string;
  label: string;
  states: string[];
}

export interface NetworkDescription {
  version: number;
  variables: VariableDescription[];
  parents: Record<string, string[]>;
  notes: {
    groups?: Record<string, string>;
    [key: string]: unknown;
  };
}

/** Evidence value: one state label, or a set of labels (a disjunction). */
export type EvidenceValue = string | string[];
export type Evidence = Record<string, EvidenceValue>;

export interface TargetSelection {
  variable: string;
  state: string;
}

export interface QueryResponse {
  probability: number;
  evidence_probability: number;
  method: string;
}

export interface MarginalBlock {
  states: string[];
  probabilities: number[];
}

export interface MarginalsResponse {
  marginals: Record<string, MarginalBlock>;
}

export interface InfluenceRow {
  variable: string;
  probability: number | null;
  delta: number | null;
  error: string | null;
}

export interface InfluenceResponse {
  base_probability: number;
  rows: InfluenceRow[];
}

export interface WhatIfRow {
  variable: string;
  state: string;
  probability: number;
}

export interface WhatIfResponse {
  base_evidence: Evidence;
  base_probability: number;
  rows: WhatIfRow[];
  combined: number | null;
}
