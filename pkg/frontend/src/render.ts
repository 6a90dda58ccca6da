// Pure string renderers: network SVG, dialogue transcript, outcome summary.
// No DOM access here so everything can be unit tested in node.

import { CANVAS, vertiportPosition, waypointPosition } from "./layout.js";
import type {
  AgentView,
  NetworkCorridor,
  NetworkResponse,
  Outcome,
  Turn,
} from "./types.js";

function esc(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

/** Coverage bucket of one waypoint: which managers reach it. */
export function coverageClass(corridor: NetworkCorridor, wp: number): string {
  const reaching = Object.entries(corridor.coverage)
    .filter(([, wps]) => wps.includes(wp))
    .map(([tm]) => tm)
    .sort();
  if (reaching.length === 0) return "wp-uncovered";
  if (reaching.length > 1) return "wp-shared";
  return `wp-uatm${reaching[0]}`;
}

export function renderNetworkSvg(
  network: NetworkResponse,
  agents: AgentView[]
): string {
  const parts: string[] = [];
  parts.push(
    `<svg viewBox="0 0 ${CANVAS.width} ${CANVAS.height}" class="network" role="img">`
  );
  for (const corridor of network.corridors) {
    const a = vertiportPosition(corridor.start);
    const b = vertiportPosition(corridor.end);
    parts.push(
      `<line class="corridor" data-corridor="${corridor.start}-${corridor.end}" ` +
        `x1="${a.x}" y1="${a.y}" x2="${b.x}" y2="${b.y}"/>`
    );
    const total = corridor.waypoints ?? 0;
    for (let wp = 1; wp <= total; wp++) {
      const p = waypointPosition(corridor.start, corridor.end, wp, total);
      parts.push(
        `<circle class="waypoint ${coverageClass(corridor, wp)}" ` +
          `data-wp="${corridor.start}-${corridor.end}:${wp}" ` +
          `cx="${p.x}" cy="${p.y}" r="4"/>`
      );
    }
  }
  for (const vp of network.vertiports) {
    const p = vertiportPosition(vp);
    const owners = Object.entries(network.ownership)
      .filter(([, vps]) => vps.includes(vp))
      .map(([tm]) => tm);
    parts.push(
      `<g class="vertiport" data-vp="${vp}">` +
        `<circle cx="${p.x}" cy="${p.y}" r="16"/>` +
        `<text x="${p.x}" y="${p.y + 5}">${vp}</text>` +
        (owners.length
          ? `<text class="owner" x="${p.x}" y="${p.y - 22}">UATM ${owners.join(",")}</text>`
          : "") +
        `</g>`
    );
  }
  for (const agent of agents) {
    const [u, v] = agent.corridor;
    const corridor = network.corridors.find((c) => c.start === u && c.end === v);
    const total = corridor?.waypoints ?? agent.waypoint;
    const p = waypointPosition(u, v, agent.waypoint, total);
    const coverage =
      agent.covered_by.length === 0
        ? "agent-uncovered"
        : agent.covered_by.length > 1
          ? "agent-shared"
          : `agent-uatm${agent.covered_by[0]}`;
    parts.push(
      `<g class="agent ${coverage}" data-agent="${agent.agent}">` +
        `<circle cx="${p.x}" cy="${p.y - 14}" r="9"/>` +
        `<text x="${p.x}" y="${p.y - 10}">${agent.agent}</text>` +
        `</g>`
    );
  }
  parts.push("</svg>");
  return parts.join("\n");
}

export function renderOutcome(outcome: Outcome | null): string {
  if (!outcome) {
    return `<div class="outcome empty">No outcome yet.</div>`;
  }
  const row = (label: string, agents: number[]) =>
    `<div class="outcome-row"><span class="label">${esc(label)}</span>` +
    (agents.length
      ? agents.map((a) => `<span class="chip">${a}</span>`).join("")
      : `<span class="chip none">none</span>`) +
    `</div>`;
  if (outcome.kind === "round_trip") {
    return (
      `<div class="outcome" data-kind="round_trip">` +
      row("Covered by UATM 2", outcome.covered) +
      row("Covered by others", outcome.relayed) +
      row("Round trips", outcome.round_trips) +
      `</div>`
    );
  }
  return (
    `<div class="outcome" data-kind="detour">` +
    row("Covered by UATM 1", outcome.covered) +
    row("Relayed via UATM Network", outcome.relayed) +
    row("Rerouted", outcome.rerouted) +
    `</div>`
  );
}

export function renderTranscript(turns: Turn[]): string {
  const blocks = turns.map((turn, index) => {
    const details =
      turn.speaker === "uatm" && turn.atoms.length
        ? `<details class="raw"><summary>answer set (${turn.atoms.length} atoms)` +
          (turn.validation ? ` &middot; ${esc(turn.validation)}` : "") +
          `</summary><code>${esc(turn.atoms.join(" "))}</code></details>`
        : "";
    return (
      `<div class="turn ${turn.speaker}" data-turn="${index}">` +
      `<span class="speaker">${turn.speaker === "uatm" ? "UATM" : "Supervisor"}</span>` +
      `<p>${esc(turn.text)}</p>` +
      details +
      `</div>`
    );
  });
  return `<div class="transcript">${blocks.join("\n")}</div>`;
}

export function renderStatusBar(scenario: string, status: string, pending: boolean): string {
  const state = pending ? "working&hellip;" : esc(status);
  return (
    `<div class="status-bar${pending ? " pending" : ""}">` +
    `<span class="scenario">${esc(scenario)}</span>` +
    `<span class="state">${state}</span>` +
    `</div>`
  );
}
