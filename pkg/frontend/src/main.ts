// Browser bootstrap: wires the console to the real fetch and the page DOM.

import { ApiClient } from "./api.js";
import { OperatorConsole } from "./app.js";

function byId(id: string): HTMLElement {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el;
}

const client = new ApiClient((url, init) => fetch(url, init));
const operator = new OperatorConsole(client, (html) => {
  byId("network").innerHTML = html.network;
  byId("outcome").innerHTML = html.outcome;
  byId("transcript").innerHTML = html.transcript;
  byId("status-bar").innerHTML = html.statusBar;
  byId("error").innerHTML = html.error;
});

byId("start").addEventListener("click", () => {
  const scenario = (byId("scenario") as HTMLSelectElement).value;
  const pinsRaw = (byId("pins") as HTMLInputElement).value.trim();
  const pins = pinsRaw ? pinsRaw.split(/[,\s]+/) : [];
  void operator.startSession(scenario, pins);
});
byId("report-congestion").addEventListener("click", () => {
  void operator.reportCongestion();
});
byId("clear-corridor").addEventListener("click", () => {
  void operator.clearCorridor();
});

void operator.boot();
