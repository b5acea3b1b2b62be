// Application wiring: load the network description, then keep the
// network view, evidence panels, query panel and what-if panel in sync
// with the session state. Every interaction round-trips through the
// server; the client never computes a probability.

import { ApiClient, ApiRequestError, isAbort } from "./api.js";
import {
  renderEvidencePanels,
  renderQueryPanel,
  renderWhatIfPanel,
  showPanelError,
  showWhatIfError,
} from "./panels.js";
import { markEvidenceNodes, renderNetworkView } from "./network-view.js";
import { SessionState } from "./state.js";

export interface AppElements {
  banner: HTMLElement;
  network: HTMLElement;
  evidence: HTMLElement;
  query: HTMLElement;
  whatif: HTMLElement;
}

export class App {
  state!: SessionState;

  constructor(
    private readonly client: ApiClient,
    private readonly el: AppElements,
  ) {}

  async start(): Promise<void> {
    try {
      const description = await this.client.network();
      this.state = new SessionState(description);
    } catch (err) {
      this.el.banner.hidden = false;
      this.el.banner.textContent =
        "cannot reach the query service: " +
        (err instanceof Error ? err.message : String(err));
      return;
    }
    renderNetworkView(this.el.network, this.state.description, (variable) =>
      this.focusVariable(variable),
    );
    this.renderPanels();
    await this.refreshMarginals();
  }

  private renderPanels(): void {
    renderEvidencePanels(this.el.evidence, this.state, {
      onToggle: (variable, stateLabel, selected) =>
        void this.toggleEvidence(variable, stateLabel, selected),
      onClear: () => void this.clearEvidence(),
    });
    renderQueryPanel(this.el.query, this.state, {
      onTargetChange: (variable, stateLabel) =>
        void this.changeTarget(variable, stateLabel),
    });
    renderWhatIfPanel(this.el.whatif, this.state, {
      onRun: (improvements, combined) =>
        void this.runWhatIf(improvements, combined),
    });
    markEvidenceNodes(this.el.network, new Set(Object.keys(this.state.evidence)));
  }

  private async toggleEvidence(
    variable: string,
    stateLabel: string,
    selected: boolean,
  ): Promise<void> {
    const spec = this.state.byId.get(variable);
    if (spec === undefined) return;
    const states = this.state.selectedStates(variable);
    if (selected) {
      states.add(stateLabel);
    } else {
      states.delete(stateLabel);
    }
    // keep declared state order; none selected clears the variable
    const list = spec.states.filter((s) => states.has(s));
    if (list.length === 0) {
      this.state.setEvidence(variable, null);
    } else if (list.length === 1) {
      this.state.setEvidence(variable, list[0]);
    } else {
      this.state.setEvidence(variable, list);
    }
    await this.refreshMarginals(variable);
  }

  private async clearEvidence(): Promise<void> {
    this.state.clearEvidence();
    await this.refreshMarginals();
  }

  private async changeTarget(
    variable: string | null,
    stateLabel: string | null,
  ): Promise<void> {
    this.state.setTarget(
      variable === null || stateLabel === null
        ? null
        : { variable, state: stateLabel },
    );
    this.state.lastQuery = null;
    await this.refreshMarginals();
  }

  /** Re-query the server after any change: marginals always, the
   * conditional query whenever a target is declared. */
  private async refreshMarginals(changedVariable?: string): Promise<void> {
    try {
      const marginals = await this.client.marginals(this.state.evidence);
      this.state.lastMarginals = marginals;
      const target = this.state.targetAsMap();
      if (target !== null) {
        const evidence = { ...this.state.evidence };
        delete evidence[this.state.target!.variable];
        this.state.lastQuery = await this.client.query(evidence, target);
      }
    } catch (err) {
      if (isAbort(err)) return; // a newer interaction superseded this one
      this.renderPanels();
      if (err instanceof ApiRequestError && changedVariable !== undefined) {
        showPanelError(this.el.evidence, changedVariable,
                       `${err.errorName}: ${err.message}`);
      } else {
        this.el.banner.hidden = false;
        this.el.banner.textContent =
          err instanceof Error ? err.message : String(err);
      }
      return;
    }
    this.el.banner.hidden = true;
    this.renderPanels();
  }

  private async runWhatIf(
    improvements: Record<string, string>,
    combined: boolean,
  ): Promise<void> {
    const target = this.state.targetAsMap();
    if (target === null) return;
    try {
      const base = { ...this.state.evidence };
      delete base[this.state.target!.variable];
      const [whatif, influence] = await Promise.all([
        this.client.whatif(base, target, improvements, combined),
        this.client.influence(base, target),
      ]);
      this.state.lastWhatIf = whatif;
      this.state.lastInfluence = influence;
    } catch (err) {
      if (isAbort(err)) return;
      if (err instanceof ApiRequestError) {
        showWhatIfError(this.el.whatif, `${err.errorName}: ${err.message}`);
        return;
      }
      throw err;
    }
    this.renderPanels();
  }

  private focusVariable(variable: string): void {
    const panel = this.el.evidence.querySelector<HTMLElement>(
      `.var-panel[data-var="${variable}"]`,
    );
    if (!panel) return;
    if (typeof panel.scrollIntoView === "function") {
      panel.scrollIntoView({ block: "nearest" });
    }
    for (const other of this.el.evidence.querySelectorAll(".var-panel")) {
      other.classList.toggle("focused", other === panel);
    }
  }
}

export function bootstrap(root: Document | HTMLElement): App {
  const get = (id: string): HTMLElement => {
    const el = (root instanceof Document ? root : root.ownerDocument)
      .getElementById(id);
    if (el === null) throw new Error(`missing #${id}`);
    return el;
  };
  const app = new App(new ApiClient(""), {
    banner: get("banner"),
    network: get("network-view"),
    evidence: get("evidence-panels"),
    query: get("query-panel"),
    whatif: get("whatif-panel"),
  });
  void app.start();
  return app;
}
