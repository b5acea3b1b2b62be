// Client session: the loaded network description, the analyst's
// current evidence and target, and the last server answers per panel.
// Evidence is validated against the description before it is stored,
// so an invalid selection can never be sent to the server.

import type {
  Evidence,
  EvidenceValue,
  InfluenceResponse,
  MarginalsResponse,
  NetworkDescription,
  QueryResponse,
  TargetSelection,
  VariableDescription,
  WhatIfResponse,
} from "./types.js";

export class SessionState {
  readonly byId = new Map<string, VariableDescription>();
  evidence: Evidence = {};
  target: TargetSelection | null = null;

  lastMarginals: MarginalsResponse | null = null;
  lastQuery: QueryResponse | null = null;
  lastWhatIf: WhatIfResponse | null = null;
  lastInfluence: InfluenceResponse | null = null;

  constructor(readonly description: NetworkDescription) {
    for (const v of description.variables) {
      this.byId.set(v.id, v);
    }
  }

  private checkStates(variable: string, states: string[]): void {
    const spec = this.byId.get(variable);
    if (spec === undefined) {
      throw new Error(`unknown variable ${variable}`);
    }
    for (const s of states) {
      if (!spec.states.includes(s)) {
        throw new Error(`unknown state ${s} for ${variable}`);
      }
    }
    if (states.length === 0) {
      throw new Error(`empty state set for ${variable}`);
    }
  }

  /** Replace the selection for one variable; null clears it. */
  setEvidence(variable: string, value: EvidenceValue | null): void {
    if (value === null) {
      delete this.evidence[variable];
      return;
    }
    const states = typeof value === "string" ? [value] : value;
    this.checkStates(variable, states);
    this.evidence[variable] = typeof value === "string" ? value : [...states];
  }

  /** Set of selected states for a variable (empty = no evidence). */
  selectedStates(variable: string): Set<string> {
    const value = this.evidence[variable];
    if (value === undefined) return new Set();
    return new Set(typeof value === "string" ? [value] : value);
  }

  clearEvidence(): void {
    this.evidence = {};
  }

  setTarget(target: TargetSelection | null): void {
    if (target !== null) {
      this.checkStates(target.variable, [target.state]);
    }
    this.target = target;
  }

  targetAsMap(): Record<string, string> | null {
    if (this.target === null) return null;
    return { [this.target.variable]: this.target.state };
  }
}
