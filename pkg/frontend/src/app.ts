// Console state machine: holds the latest session snapshot, serializes the
// supervisor actions (one in flight at a time), and re-renders on change.

import { ApiClient, ApiError } from "./api.js";
import {
  renderNetworkSvg,
  renderOutcome,
  renderStatusBar,
  renderTranscript,
} from "./render.js";
import type {
  AgentView,
  NetworkResponse,
  Outcome,
  Turn,
} from "./types.js";

export interface ConsoleState {
  network: NetworkResponse | null;
  agents: AgentView[];
  outcome: Outcome | null;
  turns: Turn[];
  scenario: string;
  status: string;
  pending: boolean;
  error: string | null;
}

export type RenderTarget = (html: {
  network: string;
  outcome: string;
  transcript: string;
  statusBar: string;
  error: string;
}) => void;

export class OperatorConsole {
  state: ConsoleState = {
    network: null,
    agents: [],
    outcome: null,
    turns: [],
    scenario: "-",
    status: "-",
    pending: false,
    error: null,
  };

  constructor(
    private api: ApiClient,
    private target: RenderTarget
  ) {}

  private paint(): void {
    const s = this.state;
    this.target({
      network: s.network ? renderNetworkSvg(s.network, s.agents) : "",
      outcome: renderOutcome(s.outcome),
      transcript: renderTranscript(s.turns),
      statusBar: renderStatusBar(s.scenario, s.status, s.pending),
      error: s.error ? `<div class="error">${s.error}</div>` : "",
    });
  }

  private async act(run: () => Promise<void>): Promise<void> {
    if (this.state.pending) return; // one action at a time
    this.state.pending = true;
    this.state.error = null;
    this.paint();
    try {
      await run();
    } catch (err) {
      this.state.error = err instanceof ApiError ? err.message : String(err);
    } finally {
      this.state.pending = false;
      this.paint();
    }
  }

  async boot(): Promise<void> {
    await this.act(async () => {
      this.state.network = await this.api.network();
    });
  }

  async startSession(scenario: string, pins: string[]): Promise<void> {
    await this.act(async () => {
      const session = await this.api.startSession(scenario, pins);
      this.state.scenario = session.scenario;
      this.state.status = session.status;
      this.state.outcome = session.outcome;
      this.state.turns = (await this.api.history()).turns;
      this.state.agents = (await this.api.agents()).agents;
    });
  }

  async reportCongestion(): Promise<void> {
    await this.act(async () => {
      const session = await this.api.reportCongestion(2, 3);
      this.state.scenario = session.scenario;
      this.state.status = session.status;
      this.state.outcome = session.outcome;
      this.state.turns = (await this.api.history()).turns;
      this.state.agents = (await this.api.agents()).agents;
    });
  }

  async clearCorridor(): Promise<void> {
    await this.act(async () => {
      const session = await this.api.clearCorridor(2, 3);
      this.state.scenario = session.scenario;
      this.state.status = session.status;
      this.state.outcome = session.outcome;
      this.state.turns = (await this.api.history()).turns;
      this.state.agents = (await this.api.agents()).agents;
    });
  }
}
