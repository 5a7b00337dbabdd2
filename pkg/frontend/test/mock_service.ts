// In-memory stand-in for the service. It records every request so
// tests can verify that all displayed numbers originate from
// responses, and nothing is computed client-side.

import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import type { FetchLike } from "../src/api.js";
import type { MessageResponse, SceneDocument } from "../src/types.js";

const FIXTURES = join(dirname(fileURLToPath(import.meta.url)), "fixtures");

export function fixture<T>(name: string): T {
  return JSON.parse(readFileSync(join(FIXTURES, name), "utf-8")) as T;
}

export interface RecordedRequest {
  url: string;
  method: string;
  body: unknown;
}

export class MockService {
  requests: RecordedRequest[] = [];
  scene: SceneDocument = fixture<SceneDocument>("scene.json");
  replies: MessageResponse[] = [];
  nextStatus: number | null = null;
  sessionCounter = 0;

  fetch: FetchLike = async (url, init) => {
    const method = init?.method ?? "GET";
    const body = init?.body ? JSON.parse(init.body) : undefined;
    this.requests.push({ url, method, body });

    if (this.nextStatus !== null) {
      const status = this.nextStatus;
      this.nextStatus = null;
      return respond(status, { detail: "injected failure" });
    }
    const path = url.replace(/^https?:\/\/[^/]+/, "");
    if (path === "/health") return respond(200, { status: "ok" });
    if (path === "/sessions" && method === "POST") {
      this.sessionCounter += 1;
      return respond(201, { session_id: `session-${this.sessionCounter}` });
    }
    if (/^\/sessions\/[^/]+\/messages$/.test(path) && method === "POST") {
      const reply = this.replies.shift();
      if (!reply) return respond(500, { detail: "no scripted reply left" });
      return respond(200, reply);
    }
    if (path.startsWith("/model/scene")) return respond(200, this.scene);
    if (path === "/model/summary") {
      return respond(200, { schema: "TABLES: ...", graph: "Nodes ..." });
    }
    return respond(404, { detail: `no route for ${method} ${path}` });
  };
}

function respond(status: number, payload: unknown) {
  return Promise.resolve({ status, json: async () => payload });
}
