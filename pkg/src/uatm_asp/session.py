"""Supervisor dialogue over the detour-management scenarios.

A session pairs each supervisor action with a traffic-management response
computed by solving the matching scenario.  Both sides of the exchange are
kept in an ordered history so a client can replay the conversation, inspect
the raw answer set behind any response, and see the validator's verdict.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .scenarios import (
    DetourOutcome,
    Pin,
    RoundTripOutcome,
    Scenario,
    ScenarioError,
    build_network_view,
    builtin_scenario,
    extract_outcome,
    run_query,
)
from .solver import AnswerSet, SolveResult, SolveStatus
from .validation import validate_answer_set


class SessionError(Exception):
    """An action that the session cannot perform in its current state."""


@dataclass(frozen=True)
class DialogueTurn:
    speaker: str  # "supervisor" or "uatm"
    text: str
    scenario: Optional[str] = None
    atoms: tuple[str, ...] = ()
    validation: Optional[str] = None


@dataclass
class SessionState:
    scenario: Scenario
    pins: tuple[Pin, ...]
    result: SolveResult
    outcome: object
    model: Optional[AnswerSet]


class DialogueSession:
    """One supervisor conversation with the traffic-management system."""

    def __init__(self, scenario_name: str = "query01", pins: tuple[Pin, ...] = ()):
        self.network = build_network_view()
        self.history: list[DialogueTurn] = []
        self.state: Optional[SessionState] = None
        self._start(scenario_name, pins)

    # -- internals ---------------------------------------------------------

    def _solve_turn(
        self, scenario: Scenario, pins: tuple[Pin, ...], question: str
    ) -> SessionState:
        self.history.append(
            DialogueTurn("supervisor", question, scenario=scenario.name)
        )
        g, result = run_query(scenario, pins, max_models=1)
        if result.status is SolveStatus.UNSATISFIABLE:
            self.history.append(
                DialogueTurn(
                    "uatm",
                    "No consistent traffic picture exists for that request.",
                    scenario=scenario.name,
                )
            )
            return SessionState(scenario, pins, result, None, None)
        model = result.models[0]
        report = validate_answer_set(g, model.atoms)
        outcome = extract_outcome(scenario, model, self.network)
        self.history.append(
            DialogueTurn(
                "uatm",
                self._describe(outcome),
                scenario=scenario.name,
                atoms=tuple(str(a) for a in model.symbols),
                validation=report.summary(),
            )
        )
        return SessionState(scenario, pins, result, outcome, model)

    def _describe(self, outcome) -> str:
        if isinstance(outcome, RoundTripOutcome):
            agents = ", ".join(str(a) for a, _, _ in outcome.round_routes)
            if not agents:
                return "No agents require a round detour."
            return (
                f"Round detour appended for agents {agents}; all of them "
                "completed the out-and-back leg in the plan."
            )
        assert isinstance(outcome, DetourOutcome)
        parts = []
        if outcome.covered_by_uatm1:
            covered = ", ".join(str(a) for a in outcome.covered_by_uatm1)
            parts.append(f"agents {covered} are inside UATM 1 coverage")
        if outcome.uncovered_by_uatm1:
            relayed = ", ".join(str(a) for a in outcome.uncovered_by_uatm1)
            parts.append(
                f"agents {relayed} are out of direct reach and were "
                "relayed via UATM Network"
            )
        if outcome.change_routes:
            moved = ", ".join(str(a) for a, _ in outcome.change_routes)
            parts.append(f"rerouted agents {moved} through vertiport 7")
        if not parts:
            return "No agents matched the request."
        text = "; ".join(parts)
        return text[0].upper() + text[1:] + "."

    def _start(self, scenario_name: str, pins: tuple[Pin, ...]) -> None:
        scenario = builtin_scenario(scenario_name)
        self.state = self._solve_turn(
            scenario, pins, f"Start scenario: {scenario.title}."
        )

    # -- supervisor actions ------------------------------------------------

    def agents(self):
        if self.state is None or self.state.outcome is None:
            return ()
        return self.state.outcome.locations

    def report_congestion(self, start: int, end: int) -> SessionState:
        """Report a congested corridor; reroutes vertiport-3 traffic."""
        if (start, end) != (2, 3):
            raise SessionError(
                f"congestion handling is only defined for corridor 2-3, "
                f"not {start}-{end}"
            )
        if self.state is None:
            raise SessionError("no active scenario")
        scenario = builtin_scenario("query04")
        pins = self.state.pins if self.state.scenario.pinnable else ()
        self.state = self._solve_turn(
            scenario,
            pins,
            "Corridor 2-3 is congested; divert all vertiport-3 traffic.",
        )
        return self.state

    def clear_corridor(self, start: int, end: int) -> SessionState:
        """Clear a corridor by sending agents ahead of agent 7 on a round leg."""
        if (start, end) != (2, 3):
            raise SessionError(
                f"corridor clearing is only defined for corridor 2-3, "
                f"not {start}-{end}"
            )
        scenario = builtin_scenario("query05")
        self.state = self._solve_turn(
            scenario,
            (),
            "Clear corridor 2-3 ahead of agent 7 with a round detour.",
        )
        return self.state
