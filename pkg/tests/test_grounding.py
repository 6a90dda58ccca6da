"""Grounder behavior: safety, evaluation, expansion, simplification.

The shrunken-network comparison at the bottom checks the grounder against a
naive reference that instantiates every rule over the full constant universe;
that is only feasible for a cut-down version of the traffic network, so the
full-size scenarios are covered by frozen size goldens instead.
"""

import itertools

import pytest

from uatm_asp.grounding import (
    EvaluationError,
    GroundChoice,
    GroundConstraint,
    GroundCount,
    GroundNormal,
    GroundingError,
    check_safety,
    evaluate_term,
    ground,
)
from uatm_asp.scenarios import builtin_scenario
from uatm_asp.syntax import (
    Arith,
    AtomLiteral,
    Comparison,
    Fact,
    Number,
    Rule,
    Symbol,
    Variable,
    parse_program,
)


def atoms_of(g):
    return {str(g.atoms.atom_of(i)) for i in range(len(g.atoms))}


def fact_strs(g):
    return {str(g.atoms.atom_of(i)) for i in g.facts}


class TestEvaluation:
    def test_arithmetic(self):
        binding = {"T": 3}
        term = Arith("+", Variable("T"), Number(1))
        assert evaluate_term(term, binding) == 4

    def test_division_truncates_toward_zero(self):
        assert evaluate_term(Arith("/", Number(-7), Number(2)), {}) == -3
        assert evaluate_term(Arith("/", Number(7), Number(2)), {}) == 3

    def test_division_by_zero(self):
        with pytest.raises(EvaluationError):
            evaluate_term(Arith("/", Number(1), Number(0)), {})

    def test_symbolic_arithmetic_rejected(self):
        with pytest.raises(EvaluationError):
            evaluate_term(Arith("+", Symbol("a"), Number(1)), {})

    def test_unbound_variable(self):
        with pytest.raises(EvaluationError):
            evaluate_term(Variable("X"), {})


class TestSafety:
    def test_safe_rule(self):
        stmt = parse_program("p(X) :- q(X), not r(X).").statements[0]
        assert check_safety(stmt) == []

    def test_unsafe_head_variable(self):
        stmt = parse_program("p(X, Y) :- q(X).").statements[0]
        assert check_safety(stmt) == ["Y"]

    def test_negation_does_not_bind(self):
        stmt = parse_program("p(X) :- not q(X).").statements[0]
        assert check_safety(stmt) == ["X"]

    def test_comparison_does_not_bind(self):
        stmt = parse_program("p(X) :- X < 3.").statements[0]
        assert check_safety(stmt) == ["X"]

    def test_anonymous_under_negation_is_exempt(self):
        stmt = parse_program(
            "target(A, V) :- agent(A), plan(A, U, V), not plan(A, V, _)."
        ).statements[0]
        assert check_safety(stmt) == []

    def test_unsafe_program_raises(self):
        with pytest.raises(GroundingError):
            ground(parse_program("p(X) :- not q(X)."))


class TestExpansion:
    def test_interval_fact(self):
        g = ground(parse_program("p(1..3)."))
        assert fact_strs(g) == {"p(1)", "p(2)", "p(3)"}

    def test_interval_product(self):
        g = ground(parse_program("grid(1..2, 1..2)."))
        assert len(g.facts) == 4

    def test_rule_instantiation_with_comparison(self):
        g = ground(parse_program("p(1..5). small(X) :- p(X), X < 3."))
        assert {"small(1)", "small(2)"} <= fact_strs(g)
        assert "small(3)" not in atoms_of(g)

    def test_arithmetic_head(self):
        g = ground(parse_program("step(1..2). next(T+1) :- step(T)."))
        assert {"next(2)", "next(3)"} <= fact_strs(g)

    def test_negation_over_underivable_atom_is_dropped(self):
        g = ground(parse_program("p(1). q(X) :- p(X), not r(X)."))
        assert "q(1)" in fact_strs(g)
        assert "r(1)" not in atoms_of(g)

    def test_choice_with_underivable_condition(self):
        g = ground(parse_program("a(1..2). 0{c(A, W): b(W)}1 :- a(A)."))
        choices = [r for r in g.rules if isinstance(r, GroundChoice)]
        assert all(not c.elements for c in choices)
        assert not any(str(g.atoms.atom_of(i)).startswith("c(") for i in range(len(g.atoms)))

    def test_choice_with_derivable_condition(self):
        g = ground(parse_program("a(1). b(1..3). 1{c(A, W): b(W)}1 :- a(A)."))
        choice = next(r for r in g.rules if isinstance(r, GroundChoice))
        heads = {str(g.atoms.atom_of(el.head)) for el in choice.elements}
        assert heads == {"c(1,1)", "c(1,2)", "c(1,3)"}

    def test_count_feasible_values(self):
        g = ground(
            parse_program("b(1..3). 1{c(W): b(W)}2. n(N) :- N = #count{W: c(W)}.")
        )
        counts = [r for r in g.rules if isinstance(r, GroundCount)]
        required = sorted(r.required for r in counts)
        assert required == [0, 1, 2, 3]

    def test_projection_hides_auxiliary_predicates(self):
        g = ground(
            parse_program(
                "plan(1, 1, 2). plan(1, 2, 3). "
                "target(A, V) :- plan(A, U, V), not plan(A, V, _)."
            )
        )
        hidden = [
            str(g.atoms.atom_of(i)) for i in range(len(g.atoms)) if not g.visible(i)
        ]
        assert hidden, "projection should introduce hidden atoms"
        assert "target(1,3)" in fact_strs(g)
        # target(1,2) is blocked: the projected existence of plan(1,2,_) is a
        # fact, so its rule instance is simplified away entirely
        assert "target(1,2)" not in fact_strs(g)
        live_heads = {
            str(g.atoms.atom_of(r.head))
            for r in g.rules
            if isinstance(r, GroundNormal)
        }
        assert "target(1,2)" not in live_heads


class TestSimplification:
    def test_fact_propagation_cascade(self):
        g = ground(parse_program("a. b :- a. c :- b, not d."))
        assert fact_strs(g) == {"a", "b", "c"}

    def test_violated_constraint_sets_conflict(self):
        g = ground(parse_program("a. :- a."))
        assert g.conflict

    def test_satisfiable_constraint_kept(self):
        g = ground(parse_program("a. b :- a, not c. :- c."))
        assert not g.conflict

    def test_rule_negating_fact_dropped(self):
        g = ground(parse_program("a. b :- not a."))
        assert "b" not in fact_strs(g)
        heads = {
            str(g.atoms.atom_of(r.head))
            for r in g.rules
            if isinstance(r, GroundNormal)
        }
        assert "b" not in heads


class TestScenarioGoldens:
    """Frozen regression sizes for the bundled full-size scenarios."""

    def test_detour_scenario_sizes(self):
        g = ground(builtin_scenario("query01").program)
        assert len(g.atoms) == 412
        assert len(g.rules) == 1072

    def test_round_trip_scenario_sizes(self):
        g = ground(builtin_scenario("query05").program)
        assert len(g.atoms) == 312
        assert len(g.rules) == 305

    def test_coverage_facts(self):
        g = ground(builtin_scenario("query01").program)
        facts = fact_strs(g)
        # corridor 1-2: manager 1 reaches waypoints 1..15, manager 2 7..20
        assert {f"covered_wp(1,2,1,{p})" for p in range(1, 16)} <= facts
        assert "covered_wp(1,2,1,16)" not in facts
        assert {f"covered_wp(1,2,2,{p})" for p in range(7, 21)} <= facts
        assert "covered_wp(1,2,2,6)" not in facts


# --- naive reference grounding on a shrunken network ------------------------

SHRUNK = """
agent(1..2). vp(1..3).
edge(1, 2). edge(2, 3).
edge_range(1, 2, 1..6).
edge_range(2, 3, 1..4).
covered_wp(1, 2, 1, P) :- edge_range(1, 2, P), P < 4.
covered_wp(1, 2, 2, P) :- edge_range(1, 2, P), 3 <= P.
step(1..2).
1{loc(A, 1, 1, 2, WP): edge_range(1, 2, WP)}1 :- agent(A), A <= 2.
:- loc(A1, 1, 1, 2, WP), loc(A2, 1, 1, 2, WP), A1 != A2.
plan(A, 1, 1, 2) :- agent(A).
plan(A, 1, 2, 3) :- agent(A).
covered_agent(A, TM) :- loc(A, T, U, V, WP), covered_wp(U, V, TM, WP).
uncovered(A) :- not covered_agent(A, 1), loc(A, T, 1, 2, WP), plan(A, T, 2, 3).
plan(A, T+1, U, V) :- plan(A, T, U, V), step(T+1), not uncovered(A).
"""


def naive_possible_atoms(program):
    """All atoms derivable when negation is ignored and choices always fire.

    Instantiates every statement over the whole constant universe, so it only
    works for tiny programs, but it shares no logic with the grounder.
    """
    from uatm_asp.syntax import (
        Atom,
        Choice,
        Constraint,
        Interval,
        Show,
    )
    from uatm_asp.grounding import compare_values

    constants = set()
    for stmt in program.statements:
        stack = [stmt]
        while stack:
            node = stack.pop()
            if isinstance(node, Number):
                constants.add(node.value)
            elif isinstance(node, Symbol):
                constants.add(node.name)
            elif isinstance(node, Interval):
                constants.update(range(node.lo, node.hi + 1))
            elif hasattr(node, "__dataclass_fields__"):
                for name in node.__dataclass_fields__:
                    value = getattr(node, name)
                    stack.extend(value if isinstance(value, tuple) else [value])
    # arithmetic can step one past any seen integer
    for c in [c for c in constants if isinstance(c, int)]:
        constants.add(c + 1)
        constants.add(c - 1)
    constants = sorted(constants, key=lambda v: (isinstance(v, str), str(v)))

    def variables_in(node, acc):
        if isinstance(node, Variable):
            acc.add(node.name)
        elif hasattr(node, "__dataclass_fields__"):
            for name in node.__dataclass_fields__:
                value = getattr(node, name)
                if isinstance(value, tuple):
                    for item in value:
                        variables_in(item, acc)
                else:
                    variables_in(value, acc)
        return acc

    def eval_term(term, binding):
        if isinstance(term, Number):
            return term.value
        if isinstance(term, Symbol):
            return term.name
        if isinstance(term, Variable):
            return binding[term.name]
        if isinstance(term, Arith):
            left = eval_term(term.left, binding)
            right = eval_term(term.right, binding)
            if not isinstance(left, int) or not isinstance(right, int):
                return None
            if term.op == "+":
                return left + right
            if term.op == "-":
                return left - right
            if term.op == "*":
                return left * right
            if right == 0:
                return None
            quotient = abs(left) // abs(right)
            return quotient if (left < 0) == (right < 0) else -quotient
        raise AssertionError(term)

    def atom_key(atom, binding):
        args = tuple(eval_term(t, binding) for t in atom.args)
        if any(a is None for a in args):
            return None
        return (atom.predicate, args)

    def positive_holds(items, binding, derived):
        for item in items:
            if isinstance(item, AtomLiteral):
                if item.negated:
                    continue  # over-approximation ignores negation
                key = atom_key(item.atom, binding)
                if key is None or key not in derived:
                    return False
            elif isinstance(item, Comparison):
                left = eval_term(item.left, binding)
                right = eval_term(item.right, binding)
                if left is None or right is None:
                    return False
                if not compare_values(left, item.op, right):
                    return False
            else:
                return False  # aggregates excluded from the shrunken program
        return True

    derived = set()
    for stmt in program.statements:
        if isinstance(stmt, Fact):
            heads = [stmt.atom]
            expanded = [()]
            for arg in stmt.atom.args:
                if isinstance(arg, Interval):
                    expanded = [
                        e + (v,) for e in expanded for v in range(arg.lo, arg.hi + 1)
                    ]
                else:
                    expanded = [e + (eval_term(arg, {}),) for e in expanded]
            for args in expanded:
                derived.add((stmt.atom.predicate, args))

    changed = True
    while changed:
        changed = False
        for stmt in program.statements:
            if isinstance(stmt, (Fact, Show, Constraint)):
                continue
            variables = sorted(variables_in(stmt, set()))
            for combo in itertools.product(constants, repeat=len(variables)):
                binding = dict(zip(variables, combo))
                if isinstance(stmt, Rule):
                    if positive_holds(stmt.body, binding, derived):
                        key = atom_key(stmt.head, binding)
                        if key is not None and key not in derived:
                            derived.add(key)
                            changed = True
                elif isinstance(stmt, Choice):
                    if not positive_holds(stmt.body, binding, derived):
                        continue
                    for element in stmt.elements:
                        if positive_holds(element.condition, binding, derived):
                            key = atom_key(element.head, binding)
                            if key is not None and key not in derived:
                                derived.add(key)
                                changed = True
    return {f"{p}({','.join(str(a) for a in args)})" if args else p for p, args in derived}


def test_grounder_matches_naive_reference():
    program = parse_program(SHRUNK)
    g = ground(program)
    mine = {
        str(g.atoms.atom_of(i)) for i in range(len(g.atoms)) if g.visible(i)
    }
    assert mine == naive_possible_atoms(program)
