// SVG node-link view of the network. Nodes are coloured by the class
// recorded in the document notes (modifiable / non-modifiable /
// condition); clicking a node opens its evidence selector.

import { layeredLayout, NODE_RX, NODE_RY } from "./layout.js";
import type { NetworkDescription } from "./types.js";

const GROUP_CLASS: Record<string, string> = {
  "modifiable": "node-modifiable",
  "non-modifiable": "node-non-modifiable",
  "condition": "node-condition",
};

const SVG_NS = "http://www.w3.org/2000/svg";

function esc(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function renderNetworkView(
  root: HTMLElement,
  description: NetworkDescription,
  onNodeClick: (variable: string) => void,
): void {
  const layout = layeredLayout(description);
  const groups = description.notes.groups ?? {};

  const arcs: string[] = [];
  for (const v of description.variables) {
    for (const parent of description.parents[v.id] ?? []) {
      const from = layout.positions.get(parent);
      const to = layout.positions.get(v.id);
      if (!from || !to) continue;
      // shorten so the arrow head stops at the ellipse border
      const dx = to.x - from.x;
      const dy = to.y - from.y;
      const len = Math.hypot(dx, dy) || 1;
      const x2 = to.x - (dx / len) * (NODE_RX + 6);
      const y2 = to.y - (dy / len) * (NODE_RY + 14);
      arcs.push(
        `<line class="arc" data-from="${esc(parent)}" data-to="${esc(v.id)}" ` +
          `x1="${from.x}" y1="${from.y}" x2="${Math.round(x2)}" ` +
          `y2="${Math.round(y2)}" marker-end="url(#arrow)"></line>`,
      );
    }
  }

  const nodes: string[] = [];
  for (const v of description.variables) {
    const pos = layout.positions.get(v.id);
    if (!pos) continue;
    const cls = GROUP_CLASS[groups[v.id] ?? ""] ?? "node-ungrouped";
    nodes.push(
      `<g class="node ${cls}" data-var="${esc(v.id)}" data-group="${esc(groups[v.id] ?? "")}" ` +
        `transform="translate(${pos.x},${pos.y})">` +
        `<title>${esc(v.label)}</title>` +
        `<ellipse rx="${NODE_RX}" ry="${NODE_RY}"></ellipse>` +
        `<text class="node-id" y="-2">${esc(v.id)}</text>` +
        `<text class="node-label" y="11">${esc(shorten(v.label))}</text>` +
        `</g>`,
    );
  }

  root.innerHTML =
    `<svg viewBox="0 0 ${layout.width} ${layout.height}" ` +
    `width="100%" xmlns="${SVG_NS}">` +
    `<defs><marker id="arrow" viewBox="0 0 10 10" refX="9" refY="5" ` +
    `markerWidth="7" markerHeight="7" orient="auto-start-reverse">` +
    `<path d="M 0 0 L 10 5 L 0 10 z"></path></marker></defs>` +
    `<g class="arcs">${arcs.join("")}</g>` +
    `<g class="nodes">${nodes.join("")}</g>` +
    `</svg>`;

  for (const el of root.querySelectorAll<SVGGElement>("g.node")) {
    el.addEventListener("click", () => {
      const id = el.dataset.var;
      if (id) onNodeClick(id);
    });
  }
}

/** Mark which nodes currently carry evidence. */
export function markEvidenceNodes(root: HTMLElement, vars: Set<string>): void {
  for (const el of root.querySelectorAll<SVGGElement>("g.node")) {
    el.classList.toggle("has-evidence", vars.has(el.dataset.var ?? ""));
  }
}

function shorten(label: string): string {
  return label.length <= 16 ? label : label.slice(0, 15) + "…";
}
