/**
 * @fileoverview A scripted stand-in for the hiding service.
 *
 * Plays back responses captured from the real service (tests/fixtures/),
 * with just enough state to act out the commit/undo story: after a commit
 * the tree endpoint serves the "after" tree until undo restores the
 * original. Tests inject it as the ApiClient's fetch.
 */

import type { FetchLike } from "../src/api.js";
import workedPair from "./fixtures/worked-pair.json";

export const FIRST_LEAF = "a1=t/a2=t";
export const SECOND_LEAF = "a1=t/a2=f";

export const fixture = workedPair;

function json(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "content-type": "application/json" },
  });
}

export interface ScriptedService {
  fetch: FetchLike;
  /** Requests seen, as "METHOD path" strings, for call-shape assertions. */
  calls: string[];
}

export function scriptedService(): ScriptedService {
  let committed = false;
  const calls: string[] = [];

  const fetchImpl: FetchLike = async (url, init) => {
    const method = init?.method ?? "GET";
    const path = url.replace(/^https?:\/\/[^/]+/, "");
    calls.push(`${method} ${path}`);

    if (method === "POST" && path === "/sessions") {
      return json({ id: "s1" });
    }
    if (method === "GET" && path === "/sessions/s1/tree") {
      return json(committed ? fixture.treeAfter : fixture.treeBefore);
    }
    if (method === "POST" && path === "/sessions/s1/preview") {
      const body = JSON.parse(String(init?.body)) as { leaves: string[] };
      // grouped hiding is a set sweep, so leaf order is irrelevant
      const key = [...body.leaves].sort().join(",");
      if (key === FIRST_LEAF) {
        return json(fixture.previewFirst);
      }
      if (key === SECOND_LEAF) {
        return json(fixture.previewSecond);
      }
      if (key === [FIRST_LEAF, SECOND_LEAF].sort().join(",")) {
        return json(fixture.previewGrouped);
      }
      return json(fixture.errorUnresolvable.body, fixture.errorUnresolvable.status);
    }
    if (method === "POST" && path === "/sessions/s1/commit") {
      committed = true;
      return json(fixture.commitGrouped);
    }
    if (method === "POST" && path === "/sessions/s1/undo") {
      committed = false;
      return json(fixture.undo);
    }
    if (method === "GET" && path === "/sessions/s1/export") {
      return new Response(fixture.exportAfter, {
        status: 200,
        headers: { "content-type": "text/csv" },
      });
    }
    return json({ code: "unknown-route", message: `no route for ${method} ${path}` }, 404);
  };

  return { fetch: fetchImpl, calls };
}
