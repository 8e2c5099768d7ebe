import { beforeEach, describe, expect, it } from "vitest";

import { ServiceClient } from "../src/api.js";
import { SessionStore, cellKey } from "../src/store.js";
import type { MatrixPayload } from "../src/types.js";

const BASE: MatrixPayload = {
  activities: ["a", "b"],
  cells: [
    ["-", "->"],
    ["<-", "-"],
  ] as MatrixPayload["cells"],
};

const RELAXED: MatrixPayload = {
  activities: ["a", "b"],
  cells: [
    ["<>", "<>"],
    ["<>", "<>"],
  ] as MatrixPayload["cells"],
};

/** Canned-response service double; records requests for assertions. */
function fakeService() {
  const calls: { path: string; method: string; body: string | null }[] = [];
  let current = BASE;

  const json = (status: number, body: unknown) =>
    new Response(JSON.stringify(body), {
      status,
      headers: { "content-type": "application/json" },
    });
  const text = (body: string) => new Response(body, { status: 200 });

  const fetchImpl = async (input: string, init?: RequestInit): Promise<Response> => {
    const url = new URL(input);
    const method = init?.method ?? "GET";
    const body = typeof init?.body === "string" ? init.body : null;
    calls.push({ path: url.pathname + url.search, method, body });

    if (url.pathname === "/sessions" && method === "POST") {
      return json(200, { id: "s1", ...BASE });
    }
    if (url.pathname === "/sessions/s1/ops") {
      const op = JSON.parse(body ?? "{}");
      if (op.op === "exclusive_to_direct" && op.a === "a" && op.b === "b") {
        return json(409, {
          code: "precondition_violated",
          message: "needs an exclusive or reverse-direct cell",
          detail: null,
        });
      }
      current = RELAXED;
      return json(200, {
        matrix: RELAXED,
        diff: [
          { row: "a", col: "b", old: "->", new: "<>" },
          { row: "b", col: "a", old: "<-", new: "<>" },
        ],
      });
    }
    if (url.pathname === "/sessions/s1/undo") {
      current = BASE;
      return json(200, { matrix: BASE });
    }
    if (url.pathname === "/sessions/s1/constraints") {
      return text('[{"template": "Init", "target": ["a"]}]\n');
    }
    if (url.pathname === "/sessions/s1/sql") {
      return text(`-- mode ${url.searchParams.get("mode")}\n`);
    }
    if (url.pathname === "/sessions/s1/log") {
      return json(200, { traces: 2 });
    }
    if (url.pathname === "/sessions/s1/check") {
      return json(200, {
        conformance_rate: 0.5,
        total_traces: 2,
        conforming_traces: 1,
        constraints: [{ constraint: "Init({a})", violated_traces: 1 }],
        traces: [],
      });
    }
    if (url.pathname === "/sessions/s1/matrix") {
      return text(JSON.stringify(current));
    }
    return json(404, { code: "unknown", message: "nope" });
  };

  return { fetchImpl, calls };
}

describe("SessionStore", () => {
  let service: ReturnType<typeof fakeService>;
  let store: SessionStore;

  beforeEach(async () => {
    service = fakeService();
    store = new SessionStore(new ServiceClient("http://service", service.fetchImpl));
    await store.loadNet("<pnml/>");
  });

  it("loads the derived matrix into the grid state", () => {
    expect(store.state.sessionId).toBe("s1");
    expect(store.state.matrix).toEqual(BASE);
    expect(store.state.history).toEqual([]);
  });

  it("applies an op, highlights exactly the diff cells, and refreshes previews", async () => {
    await store.applyOp({ op: "decouple", a: "a", b: "b" });
    expect(store.state.matrix).toEqual(RELAXED);
    expect(store.state.highlighted).toEqual(
      new Set([cellKey("a", "b"), cellKey("b", "a")]),
    );
    expect(store.state.history).toHaveLength(1);
    expect(store.state.constraintsPreview).toContain("Init");
    expect(store.state.sqlPreview).toContain("mode paper");
  });

  it("keeps the grid untouched and surfaces 409s on the offending cell", async () => {
    await store.applyOp({ op: "exclusive_to_direct", a: "a", b: "b" }, "a", "b");
    expect(store.state.matrix).toEqual(BASE);
    expect(store.state.history).toHaveLength(0);
    expect(store.state.error).toMatchObject({ row: "a", col: "b" });
    expect(store.state.error?.message).toContain("exclusive");
  });

  it("undo replaces the grid with the service response and pops history", async () => {
    await store.applyOp({ op: "decouple", a: "a", b: "b" });
    await store.undo();
    expect(store.state.matrix).toEqual(BASE);
    expect(store.state.history).toEqual([]);
  });

  it("renders the conformance rate to three decimals", async () => {
    await store.uploadLog("case_id,event_name,end_time\n");
    expect(store.state.logTraces).toBe(2);
    await store.check();
    expect(store.state.rateDisplay).toBe("0.500");
    expect(store.state.report?.constraints[0].violated_traces).toBe(1);
  });

  it("switching SQL mode refetches the preview", async () => {
    await store.setSqlMode("violation");
    expect(store.state.sqlPreview).toContain("mode violation");
    const sqlCalls = service.calls.filter((c) => c.path.startsWith("/sessions/s1/sql"));
    expect(sqlCalls.at(-1)?.path).toContain("mode=violation");
  });

  it("every mutation waits for the service (no optimistic grid writes)", async () => {
    // The only matrix writes come from response payloads: the fake
    // service's current matrix and the store state always agree.
    await store.applyOp({ op: "decouple", a: "a", b: "b" });
    const fromService = JSON.parse(await store.matrixText());
    expect(store.state.matrix).toEqual(fromService);
  });
});
