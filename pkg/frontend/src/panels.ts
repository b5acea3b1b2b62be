// Evidence, query and what-if panels. All rendering is a pure function
// of the session state plus the last server responses; every displayed
// number is a response field passed through the formatters.

import { formatDelta, formatPercent, formatRaw } from "./format.js";
import type { SessionState } from "./state.js";
import type { MarginalBlock } from "./types.js";

function esc(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export interface EvidenceHandlers {
  onToggle(variable: string, state: string, selected: boolean): void;
  onClear(): void;
}

function stateRow(
  variable: string,
  state: string,
  selected: boolean,
  block: MarginalBlock | undefined,
): string {
  let pct = "";
  let barWidth = 0;
  if (block) {
    const i = block.states.indexOf(state);
    if (i >= 0) {
      const p = block.probabilities[i];
      pct = formatPercent(p);
      barWidth = Math.round(1000 * p) / 10;
    }
  }
  return (
    `<label class="state-row" data-var="${esc(variable)}" data-state="${esc(state)}">` +
    `<input type="checkbox" class="evid-toggle"${selected ? " checked" : ""}>` +
    `<span class="state-name">${esc(state)}</span>` +
    `<span class="bar"><span class="bar-fill" style="width:${barWidth}%"></span></span>` +
    `<span class="pct">${pct}</span>` +
    `</label>`
  );
}

export function renderEvidencePanels(
  root: HTMLElement,
  state: SessionState,
  handlers: EvidenceHandlers,
): void {
  const marginals = state.lastMarginals?.marginals ?? {};
  const panels = state.description.variables
    .map((v) => {
      const selected = state.selectedStates(v.id);
      const rows = v.states
        .map((s) => stateRow(v.id, s, selected.has(s), marginals[v.id]))
        .join("");
      return (
        `<section class="var-panel" data-var="${esc(v.id)}">` +
        `<h3>${esc(v.id)} · ${esc(v.label)}</h3>` +
        `<div class="panel-error" hidden></div>` +
        rows +
        `</section>`
      );
    })
    .join("");
  root.innerHTML =
    `<div class="evidence-head"><h2>Evidence</h2>` +
    `<button id="clear-evidence" type="button">Clear</button></div>` +
    panels;

  root
    .querySelector<HTMLButtonElement>("#clear-evidence")!
    .addEventListener("click", () => handlers.onClear());
  for (const row of root.querySelectorAll<HTMLLabelElement>(".state-row")) {
    const input = row.querySelector<HTMLInputElement>(".evid-toggle")!;
    input.addEventListener("change", () => {
      handlers.onToggle(row.dataset.var!, row.dataset.state!, input.checked);
    });
  }
}

export function showPanelError(
  root: HTMLElement,
  variable: string,
  message: string | null,
): void {
  const panel = root.querySelector<HTMLElement>(
    `.var-panel[data-var="${variable}"] .panel-error`,
  );
  if (!panel) return;
  panel.hidden = message === null;
  panel.textContent = message ?? "";
}

export interface TargetHandlers {
  onTargetChange(variable: string | null, state: string | null): void;
}

export function renderQueryPanel(
  root: HTMLElement,
  state: SessionState,
  handlers: TargetHandlers,
): void {
  const variables = state.description.variables;
  const current = state.target;
  const varOptions = ['<option value="">(no target)</option>']
    .concat(
      variables.map(
        (v) =>
          `<option value="${esc(v.id)}"${current?.variable === v.id ? " selected" : ""}>` +
          `${esc(v.id)} · ${esc(v.label)}</option>`,
      ),
    )
    .join("");
  const states =
    current === null ? [] : state.byId.get(current.variable)?.states ?? [];
  const stateOptions = states
    .map(
      (s) =>
        `<option value="${esc(s)}"${current?.state === s ? " selected" : ""}>${esc(s)}</option>`,
    )
    .join("");

  let result = `<div id="query-result" class="muted">declare a target to query</div>`;
  if (state.lastQuery !== null && current !== null) {
    const q = state.lastQuery;
    result =
      `<div id="query-result">` +
      `<div class="query-headline">P(${esc(current.variable)} = ${esc(current.state)} | evidence) = ` +
      `<strong class="prob-pct">${formatPercent(q.probability)}</strong></div>` +
      `<div class="query-details">probability <span class="prob-raw" data-value="${q.probability}">${formatRaw(q.probability)}</span>` +
      ` · P(evidence) <span class="evidence-prob">${formatRaw(q.evidence_probability)}</span>` +
      ` · ${esc(q.method)}</div>` +
      `</div>`;
  }

  root.innerHTML =
    `<h2>Target</h2>` +
    `<div class="target-controls">` +
    `<select id="target-var">${varOptions}</select>` +
    `<select id="target-state"${current === null ? " disabled" : ""}>${stateOptions}</select>` +
    `</div>` +
    result;

  const varSelect = root.querySelector<HTMLSelectElement>("#target-var")!;
  const stateSelect = root.querySelector<HTMLSelectElement>("#target-state")!;
  varSelect.addEventListener("change", () => {
    const id = varSelect.value || null;
    const first = id === null ? null : state.byId.get(id)?.states[0] ?? null;
    handlers.onTargetChange(id, first);
  });
  stateSelect.addEventListener("change", () => {
    if (current !== null) {
      handlers.onTargetChange(current.variable, stateSelect.value);
    }
  });
}

export interface WhatIfHandlers {
  onRun(improvements: Record<string, string>, combined: boolean): void;
}

export function renderWhatIfPanel(
  root: HTMLElement,
  state: SessionState,
  handlers: WhatIfHandlers,
): void {
  const evidenceVars = Object.keys(state.evidence);
  const options = evidenceVars
    .map((v) => `<option value="${esc(v)}">${esc(v)}</option>`)
    .join("");
  const ready = evidenceVars.length > 0 && state.target !== null;

  let whatifBlock = "";
  if (state.lastWhatIf !== null) {
    const t = state.lastWhatIf;
    const rows = t.rows
      .map(
        (r) =>
          `<tr data-var="${esc(r.variable)}"><td>${esc(r.variable)}</td>` +
          `<td>${esc(r.state)}</td>` +
          `<td class="num" data-value="${r.probability}">${formatPercent(r.probability)}</td></tr>`,
      )
      .join("");
    const combined =
      t.combined === null
        ? ""
        : `<tr class="combined-row"><td>(all)</td><td></td>` +
          `<td class="num" data-value="${t.combined}">${formatPercent(t.combined)}</td></tr>`;
    whatifBlock =
      `<h3>Improved-state scenarios</h3>` +
      `<div class="whatif-base">base probability ` +
      `<span class="num" data-value="${t.base_probability}">${formatPercent(t.base_probability)}</span></div>` +
      `<table id="whatif-table"><thead><tr><th>variable</th><th>improved to</th>` +
      `<th>probability</th></tr></thead><tbody>${rows}${combined}</tbody></table>`;
  }

  let influenceBlock = "";
  if (state.lastInfluence !== null) {
    const items = state.lastInfluence.rows
      .map((r, i) => {
        const body =
          r.error !== null
            ? `${esc(r.variable)}: ${esc(r.error)}`
            : `${esc(r.variable)} <span class="num" data-value="${r.probability}">` +
              `${formatPercent(r.probability!)}</span> ` +
              `<span class="delta">${formatDelta(r.delta!)}</span>`;
        return `<li data-var="${esc(r.variable)}"${i === 0 ? ' class="top-finding"' : ""}>${body}</li>`;
      })
      .join("");
    influenceBlock =
      `<h3>Influential findings</h3>` +
      `<ol id="influence-ranking">${items}</ol>`;
  }

  root.innerHTML =
    `<h2>What-if</h2>` +
    `<div class="improve-controls">` +
    `<select id="improve-var"${ready ? "" : " disabled"}>${options}</select>` +
    `<select id="improve-state"${ready ? "" : " disabled"}></select>` +
    `<button id="run-whatif" type="button"${ready ? "" : " disabled"}>Run</button>` +
    `</div>` +
    `<div id="whatif-error" hidden></div>` +
    (ready ? "" : `<div class="muted">set evidence and a target first</div>`) +
    whatifBlock +
    influenceBlock;

  const varSelect = root.querySelector<HTMLSelectElement>("#improve-var")!;
  const stateSelect = root.querySelector<HTMLSelectElement>("#improve-state")!;
  const error = root.querySelector<HTMLElement>("#whatif-error")!;

  const fillStates = () => {
    const spec = state.byId.get(varSelect.value);
    stateSelect.innerHTML = (spec?.states ?? [])
      .map((s) => `<option value="${esc(s)}">${esc(s)}</option>`)
      .join("");
  };
  if (ready) fillStates();
  varSelect.addEventListener("change", fillStates);

  root
    .querySelector<HTMLButtonElement>("#run-whatif")!
    .addEventListener("click", () => {
      error.hidden = true;
      const variable = varSelect.value;
      const improved = stateSelect.value;
      if (!variable) return;
      // client-side validation: no request leaves for inputs the server
      // would reject with NotInBase / SameState
      const base = state.evidence[variable];
      if (base === undefined) {
        error.hidden = false;
        error.textContent = `NotInBase: ${variable} carries no evidence`;
        return;
      }
      const baseStates = state.selectedStates(variable);
      if (baseStates.size === 1 && baseStates.has(improved)) {
        error.hidden = false;
        error.textContent = `SameState: ${variable} is already ${improved}`;
        return;
      }
      handlers.onRun({ [variable]: improved }, true);
    });
}

export function showWhatIfError(root: HTMLElement, message: string): void {
  const el = root.querySelector<HTMLElement>("#whatif-error");
  if (!el) return;
  el.hidden = false;
  el.textContent = message;
}
