// The only numeric presentation used anywhere in the UI. Values are
// rendered straight off response fields; no other arithmetic on
// probabilities is allowed in this codebase.

export function formatPercent(p: number): string {
  return (100 * p).toFixed(2) + "%";
}

/** Raw value of a response field, for exactness-sensitive displays. */
export function formatRaw(p: number): string {
  return String(p);
}

export function formatDelta(d: number): string {
  const text = (100 * d).toFixed(2) + "%";
  return d >= 0 ? "+" + text : text;
}
