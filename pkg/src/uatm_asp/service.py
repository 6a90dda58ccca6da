"""HTTP/JSON facade over the dialogue sessions.

All state lives in one server-side session guarded by a lock; the endpoints
are thin translations between pydantic models and the session API.  Every
response carries ``schema_version`` so clients can detect payload changes.
"""

from __future__ import annotations

import threading
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, HTTPException, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from .scenarios import (
    DetourOutcome,
    PinError,
    RoundTripOutcome,
    ScenarioError,
    build_network_view,
    parse_pin,
)
from .session import DialogueSession, SessionError
from .solver import SolveStatus

SCHEMA_VERSION = 1


class NetworkCorridor(BaseModel):
    start: int
    end: int
    waypoints: Optional[int]
    coverage: dict[int, list[int]]
    uncovered: list[int]


class NetworkResponse(BaseModel):
    schema_version: int = SCHEMA_VERSION
    vertiports: list[int]
    managers: list[int]
    ownership: dict[int, list[int]]
    corridors: list[NetworkCorridor]


class AgentView(BaseModel):
    agent: int
    step: int
    corridor: tuple[int, int]
    waypoint: int
    covered_by: list[int]


class AgentsResponse(BaseModel):
    schema_version: int = SCHEMA_VERSION
    agents: list[AgentView]


class SessionRequest(BaseModel):
    scenario: str = "query01"
    pins: list[str] = Field(default_factory=list)


class CorridorAction(BaseModel):
    start: int
    end: int


class OutcomeModel(BaseModel):
    kind: str
    covered: list[int] = Field(default_factory=list)
    relayed: list[int] = Field(default_factory=list)
    rerouted: list[int] = Field(default_factory=list)
    round_trips: list[int] = Field(default_factory=list)


class TurnModel(BaseModel):
    speaker: str
    text: str
    scenario: Optional[str]
    atoms: list[str]
    validation: Optional[str]


class SessionResponse(BaseModel):
    schema_version: int = SCHEMA_VERSION
    scenario: str
    status: str
    outcome: Optional[OutcomeModel]
    turns: list[TurnModel]


class HistoryResponse(BaseModel):
    schema_version: int = SCHEMA_VERSION
    turns: list[TurnModel]


class ModelResponse(BaseModel):
    schema_version: int = SCHEMA_VERSION
    scenario: str
    status: str
    atoms: list[str]
    projected: list[str]


def _outcome_model(outcome) -> Optional[OutcomeModel]:
    if isinstance(outcome, DetourOutcome):
        return OutcomeModel(
            kind="detour",
            covered=list(outcome.covered_by_uatm1),
            relayed=list(outcome.uncovered_by_uatm1),
            rerouted=[a for a, _ in outcome.change_routes],
        )
    if isinstance(outcome, RoundTripOutcome):
        return OutcomeModel(
            kind="round_trip",
            covered=list(outcome.covered_by_uatm2),
            relayed=list(outcome.covered_by_other),
            round_trips=[a for a, _, _ in outcome.round_routes],
        )
    return None


def _turns(session: DialogueSession, last: Optional[int] = None) -> list[TurnModel]:
    turns = session.history if last is None else session.history[-last:]
    return [
        TurnModel(
            speaker=t.speaker,
            text=t.text,
            scenario=t.scenario,
            atoms=list(t.atoms),
            validation=t.validation,
        )
        for t in turns
    ]


def create_app(frontend_dir: Optional[Path] = None) -> FastAPI:
    app = FastAPI(title="uatm-asp dialogue service")
    lock = threading.Lock()
    holder: dict[str, DialogueSession] = {}

    @app.exception_handler(RequestValidationError)
    async def bad_request(_req: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400, content={"detail": str(exc)})

    def current() -> DialogueSession:
        session = holder.get("session")
        if session is None:
            raise HTTPException(status_code=409, detail="no active session")
        return session

    def session_response(session: DialogueSession) -> SessionResponse:
        state = session.state
        return SessionResponse(
            scenario=state.scenario.name,
            status=state.result.status.value,
            outcome=_outcome_model(state.outcome),
            turns=_turns(session, last=2),
        )

    @app.get("/api/network", response_model=NetworkResponse)
    def network():
        view = build_network_view()
        return NetworkResponse(
            vertiports=list(view.vertiports),
            managers=list(view.managers),
            ownership={tm: list(vps) for tm, vps in view.ownership.items()},
            corridors=[
                NetworkCorridor(
                    start=c.start,
                    end=c.end,
                    waypoints=c.waypoints,
                    coverage={tm: sorted(wps) for tm, wps in c.coverage.items()},
                    uncovered=sorted(c.uncovered_waypoints()),
                )
                for c in view.corridors
            ],
        )

    @app.post("/api/session", response_model=SessionResponse)
    def start_session(request: SessionRequest):
        with lock:
            try:
                pins = tuple(parse_pin(p) for p in request.pins)
                session = DialogueSession(request.scenario, pins)
            except ScenarioError as exc:
                raise HTTPException(status_code=404, detail=str(exc))
            except PinError as exc:
                raise HTTPException(status_code=400, detail=str(exc))
            holder["session"] = session
            return session_response(session)

    @app.get("/api/agents", response_model=AgentsResponse)
    def agents():
        with lock:
            session = current()
            return AgentsResponse(
                agents=[
                    AgentView(
                        agent=s.agent,
                        step=s.step,
                        corridor=s.corridor,
                        waypoint=s.waypoint,
                        covered_by=list(s.covered_by),
                    )
                    for s in session.agents()
                ]
            )

    @app.post("/api/actions/report-congestion", response_model=SessionResponse)
    def report_congestion(action: CorridorAction):
        with lock:
            session = current()
            try:
                session.report_congestion(action.start, action.end)
            except SessionError as exc:
                raise HTTPException(status_code=400, detail=str(exc))
            return session_response(session)

    @app.post("/api/actions/clear-corridor", response_model=SessionResponse)
    def clear_corridor(action: CorridorAction):
        with lock:
            session = current()
            try:
                session.clear_corridor(action.start, action.end)
            except SessionError as exc:
                raise HTTPException(status_code=400, detail=str(exc))
            return session_response(session)

    @app.get("/api/history", response_model=HistoryResponse)
    def history():
        with lock:
            session = current()
            return HistoryResponse(turns=_turns(session))

    @app.get("/api/models/latest", response_model=ModelResponse)
    def latest_model():
        with lock:
            session = current()
            state = session.state
            if state.model is None:
                raise HTTPException(status_code=404, detail="no model available")
            return ModelResponse(
                scenario=state.scenario.name,
                status=state.result.status.value,
                atoms=[str(a) for a in state.model.symbols],
                projected=[str(a) for a in state.model.projected],
            )

    if frontend_dir is not None and frontend_dir.is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=frontend_dir, html=True), name="ui")

    return app
