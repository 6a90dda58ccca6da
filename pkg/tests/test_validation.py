"""Independent validator: accepts solver output, rejects perturbed sets."""

import random

import pytest

from uatm_asp.grounding import ground
from uatm_asp.scenarios import builtin_scenario, parse_pin, run_query
from uatm_asp.solver import ALL, solve
from uatm_asp.syntax import parse_program
from uatm_asp.validation import validate_answer_set

from oracle_reference import random_ground_program


def test_accepts_simple_model():
    g = ground(parse_program("a. b :- a. c :- b, not d."))
    result = solve(g, max_models=ALL)
    report = validate_answer_set(g, result.models[0].atoms)
    assert report.valid
    assert report.checked_rules == len(g.rules)
    assert "valid answer set" in report.summary()


def test_rejects_constraint_violation():
    g = ground(parse_program("0{a}1. :- a."))
    ids = {str(g.atoms.atom_of(i)): i for i in range(len(g.atoms))}
    report = validate_answer_set(g, frozenset({ids["a"]}))
    assert not report.valid
    assert any("constraint" in f for f in report.failures)


def test_rejects_unfounded_atom():
    g = ground(parse_program("0{a}1. b :- a."))
    ids = {str(g.atoms.atom_of(i)): i for i in range(len(g.atoms))}
    report = validate_answer_set(g, frozenset({ids["b"]}))
    assert not report.valid
    assert report.unfounded == ("b",)


def test_rejects_missing_derivable_atom():
    g = ground(parse_program("0{a}1. b :- a."))
    ids = {str(g.atoms.atom_of(i)): i for i in range(len(g.atoms))}
    report = validate_answer_set(g, frozenset({ids["a"]}))
    assert not report.valid
    assert any("fires but head is false" in f or "missing" in f for f in report.failures)


def test_rejects_choice_bound_break():
    g = ground(parse_program("1{a; b}1."))
    ids = {str(g.atoms.atom_of(i)): i for i in range(len(g.atoms))}
    report = validate_answer_set(g, frozenset({ids["a"], ids["b"]}))
    assert not report.valid
    assert any("choice" in f for f in report.failures)


@pytest.mark.parametrize("seed", range(60))
def test_validator_agrees_with_solver_on_random_programs(seed):
    rng = random.Random(10_000 + seed)
    g = random_ground_program(rng)
    result = solve(g, max_models=ALL)
    for model in result.models:
        assert validate_answer_set(g, model.atoms).valid
        # flipping any single atom must break validity
        for idx in range(len(g.atoms)):
            mutated = (
                model.atoms - {idx} if idx in model.atoms else model.atoms | {idx}
            )
            if frozenset(mutated) in {m.atoms for m in result.models}:
                continue  # a different genuine answer set
            assert not validate_answer_set(g, frozenset(mutated)).valid


def test_validates_pinned_scenario_models():
    for name, pins in [
        ("query01", ("1=1-2:1", "2=1-2:11", "3=1-2:19", "4=1-2:16", "5=1-2:4", "6=1-2:2")),
        ("query05", ()),
    ]:
        scenario = builtin_scenario(name)
        pin_objs = tuple(parse_pin(p) for p in pins)
        g, result = run_query(scenario, pin_objs)
        for model in result.models:
            report = validate_answer_set(g, model.atoms)
            assert report.valid, report.failures


def test_scenario_model_mutations_rejected():
    scenario = builtin_scenario("query05")
    g, result = run_query(scenario)
    model = result.models[0]
    visible = [i for i in range(len(g.atoms)) if g.visible(i)]
    for idx in visible[:40]:
        mutated = model.atoms - {idx} if idx in model.atoms else model.atoms | {idx}
        assert not validate_answer_set(g, frozenset(mutated)).valid
