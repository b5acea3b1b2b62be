// Shared test plumbing: a routed fetch stub over the recorded engine
// fixtures, and DOM scaffolding matching index.html.

import { vi } from "vitest";

import networkFixture from "./fixtures/network.json";
import marginalsPrior from "./fixtures/marginals_prior.json";
import marginalsOldest from "./fixtures/marginals_age_oldest.json";

export { networkFixture, marginalsPrior, marginalsOldest };

export interface FetchCall {
  url: string;
  method: string;
  body: unknown;
  signal: AbortSignal | undefined;
}

export type Route = (call: FetchCall) => unknown;

export function jsonResponse(payload: unknown, status = 200): Response {
  return new Response(JSON.stringify(payload), {
    status,
    headers: { "content-type": "application/json" },
  });
}

/** Install a fetch stub; returns the log of calls it served. */
export function stubFetch(routes: Record<string, Route>): FetchCall[] {
  const calls: FetchCall[] = [];
  vi.stubGlobal(
    "fetch",
    vi.fn(async (url: string, init?: RequestInit) => {
      const call: FetchCall = {
        url: String(url),
        method: init?.method ?? "GET",
        body: init?.body ? JSON.parse(String(init.body)) : undefined,
        signal: init?.signal ?? undefined,
      };
      calls.push(call);
      const route = routes[call.url];
      if (route === undefined) {
        return jsonResponse({ error: "HttpError", message: "no route" }, 404);
      }
      const result = route(call);
      return result instanceof Response ? result : jsonResponse(result);
    }),
  );
  return calls;
}

/** Routes for a stub server over the recorded fixture answers. */
export function fixtureRoutes(extra: Record<string, Route> = {}): Record<string, Route> {
  return {
    "/api/network": () => networkFixture,
    "/api/marginals": (call) => {
      const evidence = (call.body as { evidence: Record<string, unknown> })
        .evidence;
      if (Object.keys(evidence).length === 0) return marginalsPrior;
      if (
        Object.keys(evidence).length === 1 &&
        evidence["v2"] === "(64-74]"
      ) {
        return marginalsOldest;
      }
      return marginalsPrior;
    },
    ...extra,
  };
}

export function mountAppShell(): void {
  document.body.innerHTML = `
    <div id="banner" hidden></div>
    <div id="network-view"></div>
    <div id="evidence-panels"></div>
    <div id="query-panel"></div>
    <div id="whatif-panel"></div>
  `;
}

export async function flush(times = 6): Promise<void> {
  for (let i = 0; i < times; i++) {
    await new Promise((resolve) => setTimeout(resolve, 0));
  }
}

/** The checkbox for one (variable, state) row in the evidence panels. */
export function stateToggle(variable: string, state: string): HTMLInputElement {
  const row = document.querySelector(
    `.state-row[data-var="${variable}"][data-state="${state}"] .evid-toggle`,
  );
  if (!(row instanceof HTMLInputElement)) {
    throw new Error(`no toggle for ${variable}=${state}`);
  }
  return row;
}

export function panelPercents(variable: string): string[] {
  return [
    ...document.querySelectorAll(
      `.var-panel[data-var="${variable}"] .pct`,
    ),
  ].map((el) => el.textContent ?? "");
}
