/** Fetch stub that serves the fixture payloads and records every request,
 * so tests can both drive the app offline and assert which queries the
 * client issued. */

import {
  DATASET_ID,
  INSTANCES,
  LABEL_ORDERS,
  LISTING,
  RUNS,
  SIMILARITY,
  SUMMARY,
  instancesPayload,
} from "./fixtures.js";
import { App } from "../src/app.js";

export interface ApiStub {
  /** request URLs in arrival order */
  calls: string[];
  restore: () => void;
}

function json(payload: unknown, status = 200): Response {
  return new Response(JSON.stringify(payload), {
    status,
    headers: { "content-type": "application/json" },
  });
}

function route(url: URL): Response {
  const path = url.pathname;
  if (path === "/api/v1/datasets") {
    return json(LISTING);
  }
  const prefix = `/api/v1/datasets/${DATASET_ID}`;
  if (!path.startsWith(prefix)) {
    return json({ detail: "unknown dataset" }, 404);
  }
  const tail = path.slice(prefix.length);
  if (tail === "/summary") {
    return json(SUMMARY);
  }
  if (tail === "/labels") {
    const sort = url.searchParams.get("sort") ?? "id";
    const direction = url.searchParams.get("direction") ?? "asc";
    const rows = LABEL_ORDERS[`${sort}:${direction}`];
    if (!rows) {
      return json({ detail: `unknown sort ${sort}:${direction}` }, 400);
    }
    return json({ sort, direction, run: null, runs: RUNS, labels: rows });
  }
  if (tail === "/similarity") {
    return json(SIMILARITY);
  }
  if (tail === "/instances") {
    const labelParam = url.searchParams.get("label");
    const label = labelParam === null ? null : Number(labelParam);
    const page = Number(url.searchParams.get("page") ?? "0");
    return json(instancesPayload(label, page));
  }
  const docMatch = tail.match(/^\/instances\/([^/]+)\/document$/);
  if (docMatch) {
    const row = INSTANCES.find((candidate) => candidate.id === docMatch[1]);
    if (!row) {
      return json({ detail: "unknown instance" }, 404);
    }
    if (row.body === null) {
      return json({ detail: "document file missing" }, 410);
    }
    return new Response(row.body, {
      status: 200,
      headers: { "content-type": "text/plain; charset=utf-8" },
    });
  }
  return json({ detail: `no route for ${path}` }, 404);
}

export function installApiStub(): ApiStub {
  const calls: string[] = [];
  const original = globalThis.fetch;
  globalThis.fetch = (async (input: RequestInfo | URL): Promise<Response> => {
    const raw = input instanceof Request ? input.url : String(input);
    calls.push(raw);
    return route(new URL(raw, "http://localhost"));
  }) as typeof fetch;
  return {
    calls,
    restore: () => {
      globalThis.fetch = original;
    },
  };
}

/** run queued microtasks and timers so async renders settle */
export async function flush(times = 4): Promise<void> {
  for (let i = 0; i < times; i++) {
    await new Promise((resolve) => setTimeout(resolve, 0));
  }
}

export interface BootedApp {
  app: App;
  root: HTMLElement;
  stub: ApiStub;
}

/** mount the real app against the stubbed API and wait until it settles */
export async function bootApp(): Promise<BootedApp> {
  const stub = installApiStub();
  const root = document.createElement("main");
  root.id = "app";
  document.body.append(root);
  const app = new App(root);
  await app.start();
  await flush();
  return { app, root, stub };
}

export function tearDown(booted: BootedApp): void {
  booted.stub.restore();
  booted.root.remove();
}

/** last request URL matching a path fragment, or undefined */
export function lastCall(stub: ApiStub, fragment: string): string | undefined {
  return [...stub.calls].reverse().find((candidate) => candidate.includes(fragment));
}
