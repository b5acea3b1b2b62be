// Deterministic layered layout: a node's layer is its longest path
// from a root, horizontal order follows the declared variable order.
// No force simulation, so the same description always draws the same
// picture.

import type { NetworkDescription } from "./types.js";

export interface NodePosition {
  id: string;
  x: number;
  y: number;
  layer: number;
}

export interface LayoutResult {
  positions: Map<string, NodePosition>;
  width: number;
  height: number;
}

export const NODE_RX = 36;
export const NODE_RY = 20;
const LAYER_GAP = 96;
const MARGIN_Y = 48;
const MIN_SLOT = 104;

export function topologicalOrder(description: NetworkDescription): string[] {
  const ids = description.variables.map((v) => v.id);
  const remaining = new Map<string, Set<string>>();
  for (const id of ids) {
    remaining.set(id, new Set(description.parents[id] ?? []));
  }
  const order: string[] = [];
  const placed = new Set<string>();
  while (order.length < ids.length) {
    const ready = ids.find(
      (id) =>
        !placed.has(id) &&
        [...(remaining.get(id) ?? [])].every((p) => placed.has(p)),
    );
    if (ready === undefined) {
      throw new Error("network description contains a cycle");
    }
    order.push(ready);
    placed.add(ready);
  }
  return order;
}

export function layeredLayout(
  description: NetworkDescription,
  width = 960,
): LayoutResult {
  const order = topologicalOrder(description);
  const layer = new Map<string, number>();
  for (const id of order) {
    const parents = description.parents[id] ?? [];
    const depth =
      parents.length === 0
        ? 0
        : 1 + Math.max(...parents.map((p) => layer.get(p) ?? 0));
    layer.set(id, depth);
  }
  const byLayer = new Map<number, string[]>();
  for (const v of description.variables) {
    const l = layer.get(v.id) ?? 0;
    const bucket = byLayer.get(l) ?? [];
    bucket.push(v.id);
    byLayer.set(l, bucket);
  }
  const widest = Math.max(...[...byLayer.values()].map((b) => b.length));
  const canvasWidth = Math.max(width, widest * MIN_SLOT);
  const nLayers = Math.max(...byLayer.keys()) + 1;

  const positions = new Map<string, NodePosition>();
  for (const [l, bucket] of byLayer) {
    const slot = canvasWidth / (bucket.length + 1);
    bucket.forEach((id, i) => {
      positions.set(id, {
        id,
        x: Math.round(slot * (i + 1)),
        y: MARGIN_Y + l * LAYER_GAP,
        layer: l,
      });
    });
  }
  return {
    positions,
    width: canvasWidth,
    height: MARGIN_Y * 2 + (nLayers - 1) * LAYER_GAP,
  };
}
