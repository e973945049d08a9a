/** Fixture payloads and a scriptable fetch stub shared by the tests. */

import type { LayoutWire, SessionState } from "../src/api.js";

export function fixtureLayout(scale = 1.0): LayoutWire {
  const factor = scale;
  return {
    images: [
      { id: "img-a", x: 0 * factor, y: 0 * factor, cluster: 0 },
      { id: "img-b", x: 128 * factor, y: 0 * factor, cluster: 0 },
      { id: "img-c", x: 640 * factor, y: 256 * factor, cluster: 1 },
      { id: "img-d", x: 768 * factor, y: 256 * factor, cluster: 1 },
    ],
    clusters: [
      { id: 0, color: 0, exemplar: "img-a" },
      { id: 1, color: 1, exemplar: "img-c" },
    ],
    scale,
    clamped: false,
    minimap: [
      { cluster: 0, color: 0, centroid: [64, 0], bounding_box: [0, 0, 128, 0] },
      {
        cluster: 1,
        color: 1,
        centroid: [704, 256],
        bounding_box: [640, 256, 768, 256],
      },
    ],
  };
}

export function fixtureSession(): SessionState {
  return {
    id: "sess-1",
    created_at: "2026-01-01T00:00:00Z",
    layout_seed: 7,
    current_prompt: "a lion, studio ghibli style",
    suggestions: [],
    prompt_history: [
      {
        prompt_id: "p1",
        prompt: "a lion, studio ghibli style",
        negative_prompt: "",
        visible: true,
      },
      {
        prompt_id: "p2",
        prompt: "a fox, watercolor",
        negative_prompt: "",
        visible: true,
      },
    ],
    batches: [
      {
        prompt_id: "p1",
        images: [
          { id: "img-a", seed: 1, blocked: false, failed: false, missing: false },
          { id: "img-b", seed: 2, blocked: false, failed: false, missing: false },
        ],
      },
      {
        prompt_id: "p2",
        images: [
          { id: "img-c", seed: 3, blocked: false, failed: false, missing: false },
          { id: "img-d", seed: 4, blocked: false, failed: false, missing: false },
        ],
      },
    ],
    layout: fixtureLayout(),
  };
}

export type Route = (
  url: string,
  init?: RequestInit,
) => { status: number; body: unknown } | null;

/** Install a scripted fetch; returns the request log. */
export function stubFetch(routes: Route[]): Array<{ url: string; body: unknown }> {
  const log: Array<{ url: string; body: unknown }> = [];
  const fake = async (input: RequestInfo | URL, init?: RequestInit) => {
    const url = String(input);
    log.push({
      url,
      body: init?.body ? JSON.parse(String(init.body)) : null,
    });
    for (const route of routes) {
      const hit = route(url, init);
      if (hit) {
        return new Response(JSON.stringify(hit.body), {
          status: hit.status,
          headers: { "Content-Type": "application/json" },
        });
      }
    }
    return new Response(JSON.stringify({ detail: `no route for ${url}` }), {
      status: 404,
      headers: { "Content-Type": "application/json" },
    });
  };
  globalThis.fetch = fake as typeof fetch;
  return log;
}
