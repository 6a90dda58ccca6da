// Client and console logic against a fake fetch.

import { describe, expect, it } from "vitest";

import { ApiClient, ApiError, type FetchLike } from "../src/api.js";
import { OperatorConsole } from "../src/app.js";

import networkFixture from "./fixtures/network.json";
import agentsR1Fixture from "./fixtures/agents_r1.json";
import sessionFixture from "./fixtures/session_r4.json";
import congestionFixture from "./fixtures/congestion_r4.json";
import historyFixture from "./fixtures/history_r4.json";

function fakeFetch(
  routes: Record<string, { status?: number; body: unknown }>,
  log: string[] = []
): FetchLike {
  return async (url, init) => {
    const key = `${init?.method ?? "GET"} ${url}`;
    log.push(key);
    const route = routes[key];
    if (!route) throw new Error(`unexpected request ${key}`);
    return {
      ok: (route.status ?? 200) < 400,
      status: route.status ?? 200,
      json: async () => route.body,
    };
  };
}

const happyRoutes = {
  "GET /api/network": { body: networkFixture },
  "POST /api/session": { body: sessionFixture },
  "GET /api/agents": { body: agentsR1Fixture },
  "GET /api/history": { body: historyFixture },
  "POST /api/actions/report-congestion": { body: congestionFixture },
};

describe("ApiClient", () => {
  it("sends JSON bodies and decodes responses", async () => {
    const log: string[] = [];
    const client = new ApiClient(fakeFetch(happyRoutes, log));
    const session = await client.startSession("query01", ["1=1-2:6"]);
    expect(session.scenario).toBe("query01");
    expect(log).toEqual(["POST /api/session"]);
  });

  it("raises ApiError with the service detail", async () => {
    const client = new ApiClient(
      fakeFetch({
        "POST /api/session": {
          status: 400,
          body: { detail: "malformed pin 'x'" },
        },
      })
    );
    await expect(client.startSession("query01", ["x"])).rejects.toThrow(
      /400: malformed pin/
    );
    await expect(client.startSession("query01", ["x"])).rejects.toBeInstanceOf(
      ApiError
    );
  });
});

describe("OperatorConsole", () => {
  it("boots with the network view", async () => {
    const frames: string[] = [];
    const operator = new OperatorConsole(
      new ApiClient(fakeFetch(happyRoutes)),
      (html) => frames.push(html.network)
    );
    await operator.boot();
    expect(frames.at(-1)).toContain("data-vp=\"7\"");
  });

  it("runs a session and a congestion report, tracking pending state", async () => {
    const pendingFlags: boolean[] = [];
    const operator = new OperatorConsole(
      new ApiClient(fakeFetch(happyRoutes)),
      (html) => pendingFlags.push(html.statusBar.includes("working"))
    );
    await operator.startSession("query01", []);
    await operator.reportCongestion();
    expect(operator.state.outcome?.rerouted).toEqual([1, 2, 3, 4, 5, 6]);
    expect(operator.state.outcome?.relayed).toEqual([4, 6]);
    expect(operator.state.turns.length).toBe(4);
    // each action paints a pending frame first, then a settled one
    expect(pendingFlags).toEqual([true, false, true, false]);
  });

  it("surfaces API errors without wedging the pending flag", async () => {
    const operator = new OperatorConsole(
      new ApiClient(
        fakeFetch({
          "POST /api/session": { status: 404, body: { detail: "unknown scenario" } },
        })
      ),
      () => undefined
    );
    await operator.startSession("query99", []);
    expect(operator.state.error).toMatch(/unknown scenario/);
    expect(operator.state.pending).toBe(false);
  });
});
