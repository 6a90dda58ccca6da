// Payload shapes of the dialogue service JSON API (schema_version 1).

export interface NetworkCorridor {
  start: number;
  end: number;
  waypoints: number | null;
  coverage: Record<string, number[]>;
  uncovered: number[];
}

export interface NetworkResponse {
  schema_version: number;
  vertiports: number[];
  managers: number[];
  ownership: Record<string, number[]>;
  corridors: NetworkCorridor[];
}

export interface AgentView {
  agent: number;
  step: number;
  corridor: [number, number];
  waypoint: number;
  covered_by: number[];
}

export interface AgentsResponse {
  schema_version: number;
  agents: AgentView[];
}

export interface Outcome {
  kind: "detour" | "round_trip";
  covered: number[];
  relayed: number[];
  rerouted: number[];
  round_trips: number[];
}

export interface Turn {
  speaker: "supervisor" | "uatm";
  text: string;
  scenario: string | null;
  atoms: string[];
  validation: string | null;
}

export interface SessionResponse {
  schema_version: number;
  scenario: string;
  status: string;
  outcome: Outcome | null;
  turns: Turn[];
}

export interface HistoryResponse {
  schema_version: number;
  turns: Turn[];
}
