"""Command-line front end.

``uatm-asp solve`` mimics the familiar grounder-solver CLI surface: it reads
programs, prints each answer set on one line, and ends with a statistics
block.  ``scenario`` runs a bundled scenario with optional location pins,
``repl`` offers an interactive loop, and ``serve`` starts the HTTP service.

Exit codes: 10 when satisfiable, 20 when unsatisfiable, 1 on any error,
0 for help output.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

from . import __version__
from .grounding import GroundProgram, GroundingError, dump_ground, ground
from .scenarios import (
    PinError,
    ScenarioError,
    apply_pins,
    builtin_scenario,
    parse_pin,
)
from .solver import (
    ALL,
    SolveResult,
    SolveStatus,
    SolverBudgetError,
    solve,
)
from .syntax import LexicalError, ParseError, Program, parse_program

EXIT_SAT = 10
EXIT_UNSAT = 20
EXIT_ERROR = 1


class CliError(Exception):
    pass


def _read_programs(paths: list[str]) -> Program:
    combined = Program(())
    for raw in paths:
        if raw == "-":
            source = sys.stdin.read()
        else:
            path = Path(raw)
            if not path.exists():
                raise CliError(f"cannot read {raw}: no such file")
            source = path.read_text()
        try:
            combined = combined + parse_program(source)
        except (LexicalError, ParseError) as exc:
            raise CliError(f"{raw}: {exc}")
    return combined


def _format_stats(result: SolveResult, wall: float, out) -> None:
    models = str(result.stats.models)
    if not result.exhausted:
        models += "+"
    solving = result.stats.solve_time
    first = result.stats.first_model_time or 0.0
    print(file=out)
    print(f"Models       : {models}", file=out)
    print("Calls        : 1", file=out)
    print(
        f"Time         : {wall:.3f}s "
        f"(Solving: {solving:.2f}s 1st Model: {first:.2f}s Unsat: 0.00s)",
        file=out,
    )
    print(f"CPU Time     : {wall:.3f}s", file=out)


def _print_classic(
    result: SolveResult, sources: list[str], wall: float, out
) -> None:
    print(f"uatm-asp version {__version__}", file=out)
    if sources:
        print(f"Reading from {sources[0]} ...", file=out)
    print("Solving...", file=out)
    for index, model in enumerate(result.models, start=1):
        print(f"Answer: {index}", file=out)
        print(" ".join(str(atom) for atom in model.projected), file=out)
    print(result.status.value, file=out)
    _format_stats(result, wall, out)


def _print_json(result: SolveResult, wall: float, validations, out) -> None:
    payload = {
        "status": result.status.value,
        "exhausted": result.exhausted,
        "models": [
            {"atoms": [str(a) for a in m.projected]} for m in result.models
        ],
        "stats": {
            "models": result.stats.models,
            "decisions": result.stats.decisions,
            "time": round(wall, 6),
        },
    }
    if validations is not None:
        payload["validation"] = validations
    json.dump(payload, out, indent=2)
    print(file=out)


def _run_solve_pipeline(args, program: Program, sources: list[str]) -> int:
    out = sys.stdout
    start = time.perf_counter()
    g = ground(program)
    if args.dump_ground:
        print(dump_ground(g), file=out)
    max_models = ALL if args.models == 0 else args.models
    result = solve(g, max_models=max_models)
    wall = time.perf_counter() - start
    validations = None
    if args.validate:
        from .validation import validate_answer_set

        validations = [
            validate_answer_set(g, m.atoms).summary() for m in result.models
        ]
    if args.json:
        _print_json(result, wall, validations, out)
    else:
        _print_classic(result, sources, wall, out)
        if validations is not None:
            for index, verdict in enumerate(validations, start=1):
                print(f"Validation {index}: {verdict}", file=out)
    return EXIT_SAT if result.status is SolveStatus.SATISFIABLE else EXIT_UNSAT


def _cmd_solve(args) -> int:
    program = _read_programs(args.files)
    return _run_solve_pipeline(args, program, args.files)


def _cmd_scenario(args) -> int:
    scenario = builtin_scenario(args.name)
    pins = tuple(parse_pin(p) for p in args.pin)
    program = apply_pins(scenario, pins)
    return _run_solve_pipeline(args, program, [f"scenario {scenario.name}"])


def _cmd_repl(args) -> int:
    print(f"uatm-asp version {__version__} (interactive)")
    print("Type rules ending in '.', :solve [N], :ground, :clear, :exit")
    buffer: list[str] = []
    while True:
        try:
            line = input("uatm> ")
        except EOFError:
            print()
            return 0
        stripped = line.strip()
        if not stripped:
            continue
        if stripped in (":exit", ":quit"):
            return 0
        if stripped == ":clear":
            buffer.clear()
            print("cleared")
            continue
        if stripped == ":ground":
            try:
                g = ground(parse_program("\n".join(buffer)))
                print(dump_ground(g))
            except (LexicalError, ParseError, GroundingError) as exc:
                print(f"error: {exc}")
            continue
        if stripped.startswith(":load"):
            parts = stripped.split(None, 1)
            if len(parts) != 2:
                print("usage: :load FILE")
                continue
            try:
                text = Path(parts[1]).read_text()
                parse_program("\n".join(buffer) + "\n" + text)
                buffer.append(text)
                print(f"loaded {parts[1]}")
            except OSError as exc:
                print(f"error: {exc}")
            except (LexicalError, ParseError) as exc:
                print(f"error: {exc}")
            continue
        if stripped.startswith(":scenario"):
            parts = stripped.split(None, 1)
            if len(parts) != 2:
                print("usage: :scenario NAME")
                continue
            try:
                scenario = builtin_scenario(parts[1])
            except ScenarioError as exc:
                print(f"error: {exc}")
                continue
            from .syntax import print_program

            buffer.append(print_program(scenario.program))
            print(f"loaded scenario {parts[1]}")
            continue
        if stripped.startswith(":solve"):
            parts = stripped.split()
            count = 1
            if len(parts) > 1:
                try:
                    count = int(parts[1])
                except ValueError:
                    print("usage: :solve [N]   (0 for all)")
                    continue
            try:
                g = ground(parse_program("\n".join(buffer)))
                result = solve(g, max_models=ALL if count == 0 else count)
            except (LexicalError, ParseError, GroundingError) as exc:
                print(f"error: {exc}")
                continue
            except SolverBudgetError as exc:
                print(f"error: {exc}")
                continue
            for index, model in enumerate(result.models, start=1):
                print(f"Answer: {index}")
                print(" ".join(str(a) for a in model.projected))
            print(result.status.value)
            continue
        if stripped.startswith(":"):
            print(f"unknown command {stripped.split()[0]}")
            continue
        try:
            parse_program("\n".join(buffer) + "\n" + line)
            buffer.append(line)
        except (LexicalError, ParseError) as exc:
            print(f"error: {exc}")
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    port = args.port or int(os.environ.get("UATM_ASP_PORT", "8080"))
    frontend = Path(args.frontend) if args.frontend else None
    app = create_app(frontend_dir=frontend)
    uvicorn.run(app, host=args.host, port=port)
    return 0


def _add_solve_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "-n",
        "--models",
        type=int,
        default=1,
        help="number of models to compute (0 for all)",
    )
    parser.add_argument(
        "--dump-ground",
        action="store_true",
        help="print the ground program before solving",
    )
    parser.add_argument(
        "--validate",
        action="store_true",
        help="run the independent answer-set validator on each model",
    )
    parser.add_argument(
        "--json", action="store_true", help="emit machine-readable JSON"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="uatm-asp",
        description="Answer-set solving for urban air mobility detours",
    )
    parser.add_argument(
        "--version", action="version", version=f"uatm-asp {__version__}"
    )
    commands = parser.add_subparsers(dest="command", required=True)

    solve_cmd = commands.add_parser("solve", help="solve program files")
    solve_cmd.add_argument("files", nargs="+", help="program files ('-' = stdin)")
    _add_solve_options(solve_cmd)
    solve_cmd.set_defaults(func=_cmd_solve)

    scenario_cmd = commands.add_parser("scenario", help="run a bundled scenario")
    scenario_cmd.add_argument("name", help="scenario name, e.g. query01")
    scenario_cmd.add_argument(
        "--pin",
        action="append",
        default=[],
        metavar="AGENT=U-V:WP",
        help="fix an agent location (repeatable)",
    )
    _add_solve_options(scenario_cmd)
    scenario_cmd.set_defaults(func=_cmd_scenario)

    repl_cmd = commands.add_parser("repl", help="interactive session")
    repl_cmd.set_defaults(func=_cmd_repl)

    serve_cmd = commands.add_parser("serve", help="start the HTTP service")
    serve_cmd.add_argument("--host", default="127.0.0.1")
    serve_cmd.add_argument(
        "--port", type=int, default=None, help="defaults to $UATM_ASP_PORT or 8080"
    )
    serve_cmd.add_argument(
        "--frontend", default=None, help="directory of built UI assets to serve"
    )
    serve_cmd.set_defaults(func=_cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 0 for --help/--version and 2 for usage errors
        return 0 if exc.code == 0 else EXIT_ERROR
    try:
        return args.func(args)
    except (
        CliError,
        ScenarioError,
        PinError,
        GroundingError,
        SolverBudgetError,
    ) as exc:
        print(f"uatm-asp: error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except KeyboardInterrupt:
        return EXIT_ERROR


def entry_point() -> None:
    sys.exit(main())
