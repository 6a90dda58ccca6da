"""Answer-set solving engine and dialogue service for UAM detour management."""

__version__ = "0.1.0"

from .grounding import GroundAtom, GroundProgram, GroundingError, ground
from .scenarios import (
    DetourOutcome,
    Pin,
    PinError,
    RoundTripOutcome,
    Scenario,
    ScenarioError,
    build_network_view,
    builtin_scenario,
    extract_outcome,
    parse_pin,
    run_query,
)
from .session import DialogueSession, DialogueTurn, SessionError
from .solver import (
    ALL,
    AnswerSet,
    SolveResult,
    SolveStatus,
    SolverBudgetError,
    eval_aggregate,
    gl_reduct,
    is_stable,
    least_model,
    solve,
)
from .syntax import LexicalError, ParseError, Program, parse_program, print_program
from .validation import ValidationReport, validate_answer_set

__all__ = [
    "ALL",
    "AnswerSet",
    "DetourOutcome",
    "DialogueSession",
    "DialogueTurn",
    "GroundAtom",
    "GroundProgram",
    "GroundingError",
    "LexicalError",
    "ParseError",
    "Pin",
    "PinError",
    "Program",
    "RoundTripOutcome",
    "Scenario",
    "ScenarioError",
    "SessionError",
    "SolveResult",
    "SolveStatus",
    "SolverBudgetError",
    "ValidationReport",
    "build_network_view",
    "builtin_scenario",
    "eval_aggregate",
    "extract_outcome",
    "gl_reduct",
    "ground",
    "is_stable",
    "least_model",
    "parse_pin",
    "parse_program",
    "print_program",
    "run_query",
    "solve",
    "validate_answer_set",
]
