// Rendering against captured service fixtures.

import { describe, expect, it } from "vitest";

import {
  coverageClass,
  renderNetworkSvg,
  renderOutcome,
  renderStatusBar,
  renderTranscript,
} from "../src/render.js";
import type {
  AgentsResponse,
  HistoryResponse,
  NetworkResponse,
  SessionResponse,
} from "../src/types.js";

import networkFixture from "./fixtures/network.json";
import agentsR1Fixture from "./fixtures/agents_r1.json";
import congestionFixture from "./fixtures/congestion_r4.json";
import historyFixture from "./fixtures/history_r4.json";

const network = networkFixture as NetworkResponse;
const agentsR1 = (agentsR1Fixture as AgentsResponse).agents.filter(
  (a) => a.step === 1
);
const congestion = congestionFixture as SessionResponse;
const history = historyFixture as HistoryResponse;

describe("coverage classes (corridor constants)", () => {
  const main = network.corridors.find((c) => c.start === 1 && c.end === 2)!;
  const bypass = network.corridors.find((c) => c.start === 2 && c.end === 7)!;

  it("corridor 1-2 splits into exclusive-1 / shared / exclusive-2", () => {
    for (let wp = 1; wp <= 6; wp++) expect(coverageClass(main, wp)).toBe("wp-uatm1");
    for (let wp = 7; wp <= 15; wp++) expect(coverageClass(main, wp)).toBe("wp-shared");
    for (let wp = 16; wp <= 20; wp++) expect(coverageClass(main, wp)).toBe("wp-uatm2");
  });

  it("corridor 2-7 has an uncovered gap at waypoints 8..19", () => {
    for (let wp = 1; wp <= 7; wp++) expect(coverageClass(bypass, wp)).toBe("wp-uatm2");
    for (let wp = 8; wp <= 19; wp++) expect(coverageClass(bypass, wp)).toBe("wp-uncovered");
    for (let wp = 20; wp <= 22; wp++) expect(coverageClass(bypass, wp)).toBe("wp-uatm3");
  });
});

describe("network SVG with pinned agents", () => {
  const svg = renderNetworkSvg(network, agentsR1);

  it("draws every vertiport and corridor", () => {
    for (const vp of network.vertiports) {
      expect(svg).toContain(`data-vp="${vp}"`);
    }
    expect(svg).toContain(`data-corridor="1-2"`);
    expect(svg).toContain(`data-corridor="7-3"`);
  });

  it("marks agents with their coverage bucket", () => {
    // pins 1=1, 2=11, 3=19, 4=16, 5=4, 6=2 on corridor 1-2
    expect(svg).toMatch(/class="agent agent-uatm1" data-agent="1"/);
    expect(svg).toMatch(/class="agent agent-shared" data-agent="2"/);
    expect(svg).toMatch(/class="agent agent-uatm2" data-agent="3"/);
    expect(svg).toMatch(/class="agent agent-uatm2" data-agent="4"/);
    expect(svg).toMatch(/class="agent agent-uatm1" data-agent="5"/);
    expect(svg).toMatch(/class="agent agent-uatm1" data-agent="6"/);
  });

  it("renders a waypoint dot for each ranged corridor position", () => {
    const dots = svg.match(/class="waypoint /g) ?? [];
    expect(dots.length).toBe(20 + 13 + 22);
  });
});

describe("congestion outcome panel", () => {
  it("shows all six rerouted agents with 4 and 6 relayed", () => {
    const html = renderOutcome(congestion.outcome);
    expect(html).toContain('data-kind="detour"');
    const rerouted = html.split("Rerouted")[1]!;
    for (let agent = 1; agent <= 6; agent++) {
      expect(rerouted).toContain(`<span class="chip">${agent}</span>`);
    }
    const relayed = html.split("Relayed via UATM Network")[1]!.split("Rerouted")[0]!;
    expect(relayed).toContain(`<span class="chip">4</span>`);
    expect(relayed).toContain(`<span class="chip">6</span>`);
    expect(relayed).not.toContain(`<span class="chip">1</span>`);
  });

  it("handles the empty outcome", () => {
    expect(renderOutcome(null)).toContain("No outcome yet");
  });
});

describe("dialogue transcript", () => {
  const html = renderTranscript(history.turns);

  it("alternates supervisor and uatm turns", () => {
    const speakers = [...html.matchAll(/class="turn (\w+)"/g)].map((m) => m[1]);
    expect(speakers).toEqual(["supervisor", "uatm", "supervisor", "uatm"]);
  });

  it("mentions the relayed agents in the response text", () => {
    expect(html).toContain("relayed via UATM Network");
  });

  it("exposes the raw answer set and validator verdict behind a toggle", () => {
    expect(html).toMatch(/<details class="raw"><summary>answer set \(\d+ atoms\)/);
    expect(html).toContain("valid answer set");
    expect(html).toContain("loc(4,1,1,2,18)");
  });

  it("escapes markup in atom text", () => {
    const hostile = renderTranscript([
      {
        speaker: "uatm",
        text: "<script>alert(1)</script>",
        scenario: null,
        atoms: ["a<b"],
        validation: null,
      },
    ]);
    expect(hostile).not.toContain("<script>");
    expect(hostile).toContain("&lt;script&gt;");
  });
});

describe("status bar", () => {
  it("reflects pending state", () => {
    expect(renderStatusBar("query04", "SATISFIABLE", false)).toContain("SATISFIABLE");
    expect(renderStatusBar("query04", "SATISFIABLE", true)).toContain("working");
  });
});
