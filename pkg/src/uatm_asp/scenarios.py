"""Built-in detour-management scenarios and typed views over their models.

Each scenario bundles the shared environment program, an agent program, and a
query program.  Scenarios whose agent locations are chosen by the solver can
be pinned: a pin fixes one agent to one waypoint and is validated against the
ground choice heads before solving, so a bad pin fails fast with a clear
message instead of producing UNSATISFIABLE.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from typing import Optional

from .grounding import GroundProgram, ground
from .syntax import Choice, Fact, Program, parse_program
from .solver import ALL, AnswerSet, SolveResult, solve


class ScenarioError(Exception):
    """Unknown scenario or a scenario misconfiguration."""


class PinError(Exception):
    """A location pin that cannot be applied to the scenario."""


def program_source(name: str) -> str:
    """Source text of a bundled program component such as ``env_info``."""
    path = resources.files(__package__) / "programs" / f"{name}.lp"
    try:
        return path.read_text()
    except FileNotFoundError:
        raise ScenarioError(f"no bundled program named {name!r}") from None


@lru_cache(maxsize=None)
def _component(name: str) -> Program:
    return parse_program(program_source(name))


@dataclass(frozen=True)
class Scenario:
    name: str
    title: str
    components: tuple[str, ...]
    kind: str  # "detour" or "round_trip"
    pinnable: bool

    @property
    def program(self) -> Program:
        combined = Program(())
        for part in self.components:
            combined = combined + _component(part)
        return combined


SCENARIOS: dict[str, Scenario] = {
    s.name: s
    for s in (
        Scenario(
            "query01",
            "Agents covered by UATM 1",
            ("env_info", "agent_info1", "query01"),
            "detour",
            True,
        ),
        Scenario(
            "query02",
            "Reroute covered agents heading to vertiport 3",
            ("env_info", "agent_info1", "query02"),
            "detour",
            True,
        ),
        Scenario(
            "query03",
            "Agents out of UATM 1 reach",
            ("env_info", "agent_info1", "query03"),
            "detour",
            True,
        ),
        Scenario(
            "query04",
            "Reroute every agent heading to vertiport 3",
            ("env_info", "agent_info1", "query04"),
            "detour",
            True,
        ),
        Scenario(
            "query05",
            "Round detour for agents ahead of agent 7",
            ("env_info", "agent_info2", "query05"),
            "round_trip",
            False,
        ),
    )
}


def builtin_scenario(name: str) -> Scenario:
    try:
        return SCENARIOS[name]
    except KeyError:
        known = ", ".join(sorted(SCENARIOS))
        raise ScenarioError(f"unknown scenario {name!r} (known: {known})") from None


# ---------------------------------------------------------------------------
# Location pins
# ---------------------------------------------------------------------------

_PIN_RE = re.compile(r"^\s*(\d+)\s*=\s*(\d+)\s*-\s*(\d+)\s*:\s*(\d+)\s*$")


@dataclass(frozen=True)
class Pin:
    """Fix one agent to one waypoint on a corridor at the scenario's step."""

    agent: int
    start: int
    end: int
    waypoint: int

    def __str__(self) -> str:
        return f"{self.agent}={self.start}-{self.end}:{self.waypoint}"


def parse_pin(text: str) -> Pin:
    """Parse the ``agent=U-V:WP`` pin notation."""
    match = _PIN_RE.match(text)
    if not match:
        raise PinError(
            f"malformed pin {text!r}; expected agent=U-V:WP, e.g. 3=1-2:19"
        )
    agent, start, end, waypoint = (int(g) for g in match.groups())
    return Pin(agent, start, end, waypoint)


@lru_cache(maxsize=None)
def _choice_heads(components: tuple[str, ...]) -> frozenset[tuple[int, ...]]:
    """Ground loc atoms offered by choice rules of the scenario's program."""
    combined = Program(())
    for part in components:
        combined = combined + _component(part)
    g = ground(combined)
    heads: set[tuple[int, ...]] = set()
    for rule in g.rules:
        if not hasattr(rule, "elements") or not hasattr(rule, "lower"):
            continue
        for element in rule.elements:
            atom = g.atoms.atom_of(element.head)
            if atom.predicate == "loc":
                heads.add(atom.args)
    return frozenset(heads)


def apply_pins(scenario: Scenario, pins: tuple[Pin, ...]) -> Program:
    """Scenario program extended with pin facts, after validating the pins.

    A pin is valid when the solver could have chosen the same location, so
    the pinned atom must be a choice head of the scenario.  Appending the
    fact then forces that choice without touching the remaining agents.
    """
    if not pins:
        return scenario.program
    if not scenario.pinnable:
        raise PinError(
            f"scenario {scenario.name!r} has fixed agent locations and "
            "cannot be pinned"
        )
    heads = _choice_heads(scenario.components)
    steps = {args[1] for args in heads}
    seen_agents: set[int] = set()
    seen_spots: set[tuple[int, int, int]] = set()
    facts = []
    for pin in pins:
        if pin.agent in seen_agents:
            raise PinError(f"agent {pin.agent} is pinned more than once")
        seen_agents.add(pin.agent)
        spot = (pin.start, pin.end, pin.waypoint)
        if spot in seen_spots:
            raise PinError(
                f"waypoint {pin.waypoint} on corridor {pin.start}-{pin.end} "
                "is pinned to more than one agent"
            )
        seen_spots.add(spot)
        matched = False
        for step in sorted(steps):
            args = (pin.agent, step, pin.start, pin.end, pin.waypoint)
            if args in heads:
                matched = True
                facts.append(
                    f"loc({pin.agent}, {step}, {pin.start}, {pin.end}, "
                    f"{pin.waypoint})."
                )
                break
        if not matched:
            raise PinError(
                f"pin {pin} does not match any selectable location in "
                f"scenario {scenario.name!r}"
            )
    return scenario.program + parse_program("\n".join(facts))


def run_query(
    scenario: Scenario,
    pins: tuple[Pin, ...] = (),
    max_models: Optional[int] = ALL,
) -> tuple[GroundProgram, SolveResult]:
    """Ground and solve a scenario, optionally pinned."""
    program = apply_pins(scenario, pins)
    g = ground(program)
    return g, solve(g, max_models=max_models)


# ---------------------------------------------------------------------------
# Typed outcome extraction
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AgentSnapshot:
    agent: int
    step: int
    corridor: tuple[int, int]
    waypoint: int
    covered_by: tuple[int, ...]  # traffic managers that reach this waypoint


@dataclass(frozen=True)
class DetourOutcome:
    locations: tuple[AgentSnapshot, ...]
    covered_by_uatm1: tuple[int, ...]
    uncovered_by_uatm1: tuple[int, ...]
    detour_requests: tuple[tuple[int, int], ...]  # (agent, step)
    change_routes: tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class RoundTripOutcome:
    locations: tuple[AgentSnapshot, ...]
    covered_by_uatm2: tuple[int, ...]
    covered_by_other: tuple[int, ...]
    round_requests: tuple[tuple[int, int, int], ...]  # (agent, target, step)
    round_routes: tuple[tuple[int, int, int], ...]


def _atoms_by_predicate(model: AnswerSet) -> dict[str, list[tuple[int, ...]]]:
    table: dict[str, list[tuple[int, ...]]] = {}
    for atom in model.symbols:
        table.setdefault(atom.predicate, []).append(atom.args)
    return table


def agent_snapshots(
    model: AnswerSet, network: "VertiportNetwork"
) -> tuple[AgentSnapshot, ...]:
    table = _atoms_by_predicate(model)
    snapshots = []
    for args in sorted(table.get("loc", [])):
        agent, step, start, end, waypoint = args
        covered = network.managers_covering(start, end, waypoint)
        snapshots.append(
            AgentSnapshot(agent, step, (start, end), waypoint, covered)
        )
    return tuple(snapshots)


def extract_outcome(scenario: Scenario, model: AnswerSet, network: "VertiportNetwork"):
    """Read the scenario's answer set into a typed outcome record."""
    table = _atoms_by_predicate(model)

    def singles(pred: str) -> tuple[int, ...]:
        return tuple(sorted(args[0] for args in table.get(pred, [])))

    def pairs(pred: str) -> tuple[tuple[int, int], ...]:
        return tuple(sorted((a, b) for a, b in table.get(pred, [])))

    def triples(pred: str) -> tuple[tuple[int, int, int], ...]:
        return tuple(sorted((a, b, c) for a, b, c in table.get(pred, [])))

    locations = agent_snapshots(model, network)
    if scenario.kind == "round_trip":
        return RoundTripOutcome(
            locations=locations,
            covered_by_uatm2=singles("covered_by_uatm2"),
            covered_by_other=singles("covered_by_other"),
            round_requests=triples("round_request"),
            round_routes=triples("round_route"),
        )
    return DetourOutcome(
        locations=locations,
        covered_by_uatm1=singles("covered_by_uatm1"),
        uncovered_by_uatm1=singles("uncovered_by_uatm1"),
        detour_requests=pairs("detour_request"),
        change_routes=pairs("change_route"),
    )


# ---------------------------------------------------------------------------
# Network view
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Corridor:
    start: int
    end: int
    waypoints: Optional[int]  # highest waypoint index, None when unranged
    coverage: dict[int, frozenset[int]] = field(hash=False, default_factory=dict)

    def managers_at(self, waypoint: int) -> tuple[int, ...]:
        return tuple(
            sorted(tm for tm, wps in self.coverage.items() if waypoint in wps)
        )

    def exclusive_waypoints(self, manager: int) -> frozenset[int]:
        mine = self.coverage.get(manager, frozenset())
        others: set[int] = set()
        for tm, wps in self.coverage.items():
            if tm != manager:
                others |= wps
        return frozenset(mine - others)

    def shared_waypoints(self) -> frozenset[int]:
        shared: set[int] = set()
        all_wps = sorted(self.coverage.items())
        for i, (_, left) in enumerate(all_wps):
            for _, right in all_wps[i + 1 :]:
                shared |= left & right
        return frozenset(shared)

    def uncovered_waypoints(self) -> frozenset[int]:
        if self.waypoints is None:
            return frozenset()
        covered: set[int] = set()
        for wps in self.coverage.values():
            covered |= wps
        return frozenset(range(1, self.waypoints + 1)) - covered


@dataclass(frozen=True)
class VertiportNetwork:
    vertiports: tuple[int, ...]
    managers: tuple[int, ...]
    ownership: dict[int, tuple[int, ...]] = field(hash=False, default_factory=dict)
    corridors: tuple[Corridor, ...] = ()

    def corridor(self, start: int, end: int) -> Corridor:
        for corridor in self.corridors:
            if (corridor.start, corridor.end) == (start, end):
                return corridor
        raise ScenarioError(f"no corridor from {start} to {end}")

    def managers_covering(
        self, start: int, end: int, waypoint: int
    ) -> tuple[int, ...]:
        return self.corridor(start, end).managers_at(waypoint)


@lru_cache(maxsize=None)
def build_network_view() -> VertiportNetwork:
    """Static network facts (vertiports, corridors, coverage) as one view."""
    g = ground(_component("env_info"))
    facts: dict[str, list[tuple[int, ...]]] = {}
    for idx in sorted(g.facts):
        atom = g.atoms.atom_of(idx)
        facts.setdefault(atom.predicate, []).append(atom.args)

    edges = sorted(facts.get("edge", []))
    ranges: dict[tuple[int, int], int] = {}
    for start, end, wp in facts.get("edge_range", []):
        if (start, end) not in edges:
            raise ScenarioError(
                f"waypoint range declared for missing corridor {start}-{end}"
            )
        ranges[(start, end)] = max(ranges.get((start, end), 0), wp)

    coverage: dict[tuple[int, int], dict[int, set[int]]] = {}
    for start, end, tm, wp in facts.get("covered_wp", []):
        coverage.setdefault((start, end), {}).setdefault(tm, set()).add(wp)

    corridors = tuple(
        Corridor(
            start,
            end,
            ranges.get((start, end)),
            {
                tm: frozenset(wps)
                for tm, wps in sorted(coverage.get((start, end), {}).items())
            },
        )
        for start, end in edges
    )
    ownership = {}
    for tm, vp in sorted(facts.get("cover", [])):
        ownership.setdefault(tm, []).append(vp)
    return VertiportNetwork(
        vertiports=tuple(sorted(a[0] for a in facts.get("vp", []))),
        managers=tuple(sorted(a[0] for a in facts.get("uatm", []))),
        ownership={tm: tuple(vps) for tm, vps in ownership.items()},
        corridors=corridors,
    )
