"""Safety checking, interval expansion, and bottom-up instantiation.

The grounder turns a :class:`~uatm_asp.syntax.Program` into a variable-free
:class:`GroundProgram` over dense integer atom ids.  Instantiation runs a
deterministic bottom-up fixpoint over the atoms derivable when negation is
ignored, then simplifies:

* negative literals on atoms that can never be derived are dropped as
  satisfied, and rule instances with an underivable positive literal are
  dropped entirely;
* positive literals on unconditional facts are removed, and instances whose
  body negates a fact are dropped (semantics-preserving fact propagation);
* ``#count`` assignments expand into one aggregate rule per feasible count.

Atom ids are assigned in first-seen derivation order, so the same source text
always yields the same ground program.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Optional, Union

from .syntax import (
    Arith,
    Atom,
    AtomLiteral,
    BodyItem,
    Choice,
    ChoiceElement,
    Comparison,
    Constraint,
    CountAggregate,
    CountElement,
    Fact,
    Interval,
    Literal,
    Number,
    Program,
    Rule,
    Show,
    Statement,
    Symbol,
    Term,
    Variable,
    print_atom,
    print_statement,
)

Value = Union[int, str]


class GroundingError(Exception):
    pass


class UnsafeStatementError(GroundingError):
    def __init__(self, statement: Statement, variables: list[str]):
        names = ", ".join(variables)
        super().__init__(f"unsafe variables [{names}] in: {print_statement(statement)}")
        self.statement = statement
        self.variables = variables


class EvaluationError(GroundingError):
    pass


# ---------------------------------------------------------------------------
# Ground representation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GroundAtom:
    predicate: str
    args: tuple[Value, ...] = ()

    def __str__(self) -> str:
        if not self.args:
            return self.predicate
        return f"{self.predicate}({','.join(str(a) for a in self.args)})"


def atom_sort_key(atom: GroundAtom) -> tuple:
    """Deterministic total order: predicate, arity, then args (ints first)."""
    return (
        atom.predicate,
        len(atom.args),
        tuple((0, a) if isinstance(a, int) else (1, a) for a in atom.args),
    )


class AtomTable:
    """Bijection between dense integer ids and ground atoms."""

    def __init__(self) -> None:
        self.atoms: list[GroundAtom] = []
        self._index: dict[GroundAtom, int] = {}

    def __len__(self) -> int:
        return len(self.atoms)

    def __contains__(self, atom: GroundAtom) -> bool:
        return atom in self._index

    def add(self, atom: GroundAtom) -> int:
        existing = self._index.get(atom)
        if existing is not None:
            return existing
        idx = len(self.atoms)
        self.atoms.append(atom)
        self._index[atom] = idx
        return idx

    def id_of(self, atom: GroundAtom) -> int:
        return self._index[atom]

    def get(self, atom: GroundAtom) -> Optional[int]:
        return self._index.get(atom)

    def atom_of(self, idx: int) -> GroundAtom:
        return self.atoms[idx]


@dataclass(frozen=True)
class GroundNormal:
    head: int
    pos: tuple[int, ...]
    neg: tuple[int, ...]


@dataclass(frozen=True)
class GroundChoiceElement:
    head: int
    cond_pos: tuple[int, ...]
    cond_neg: tuple[int, ...]


@dataclass(frozen=True)
class GroundChoice:
    lower: int
    upper: int
    elements: tuple[GroundChoiceElement, ...]
    pos: tuple[int, ...]
    neg: tuple[int, ...]


@dataclass(frozen=True)
class GroundConstraint:
    pos: tuple[int, ...]
    neg: tuple[int, ...]


@dataclass(frozen=True)
class GroundCountElement:
    key: tuple[Value, ...]
    cond_pos: tuple[int, ...]
    cond_neg: tuple[int, ...]


@dataclass(frozen=True)
class GroundCount:
    head: int
    required: int
    elements: tuple[GroundCountElement, ...]
    pos: tuple[int, ...]
    neg: tuple[int, ...]


GroundRule = Union[GroundNormal, GroundChoice, GroundConstraint, GroundCount]

HIDDEN_PREFIX = "_"


@dataclass
class GroundProgram:
    atoms: AtomTable
    rules: list[GroundRule]
    shows: list[tuple[str, int]]
    facts: frozenset[int]
    conflict: bool = False

    def fact_ids(self) -> frozenset[int]:
        return self.facts

    def visible(self, idx: int) -> bool:
        return not self.atoms.atom_of(idx).predicate.startswith(HIDDEN_PREFIX)


# ---------------------------------------------------------------------------
# Term evaluation
# ---------------------------------------------------------------------------

Binding = dict[str, Value]


def evaluate_term(term: Term, binding: Binding) -> Value:
    """Evaluate a term under ``binding``; integer division truncates to zero."""
    if isinstance(term, Number):
        return term.value
    if isinstance(term, Symbol):
        return term.name
    if isinstance(term, Variable):
        try:
            return binding[term.name]
        except KeyError:
            raise EvaluationError(f"unbound variable {term.name}") from None
    if isinstance(term, Arith):
        left = evaluate_term(term.left, binding)
        right = evaluate_term(term.right, binding)
        if not isinstance(left, int) or not isinstance(right, int):
            raise EvaluationError(f"arithmetic on symbolic constant in {term!r}")
        if term.op == "+":
            return left + right
        if term.op == "-":
            return left - right
        if term.op == "*":
            return left * right
        if term.op == "/":
            if right == 0:
                raise EvaluationError("division by zero")
            quotient = abs(left) // abs(right)
            return quotient if (left >= 0) == (right >= 0) else -quotient
        raise EvaluationError(f"unknown operator {term.op!r}")
    raise EvaluationError(f"cannot evaluate {term!r}")


def _value_key(value: Value) -> tuple:
    return (0, value) if isinstance(value, int) else (1, value)


def compare_values(left: Value, op: str, right: Value) -> bool:
    if op == "==":
        return left == right
    if op == "!=":
        return left != right
    lk, rk = _value_key(left), _value_key(right)
    if op == "<":
        return lk < rk
    if op == "<=":
        return lk <= rk
    if op == ">":
        return lk > rk
    if op == ">=":
        return lk >= rk
    raise EvaluationError(f"unknown comparison {op!r}")


# ---------------------------------------------------------------------------
# Variable collection and safety
# ---------------------------------------------------------------------------


def _term_vars(term: Term, out: list[str]) -> None:
    if isinstance(term, Variable):
        out.append(term.name)
    elif isinstance(term, Arith):
        _term_vars(term.left, out)
        _term_vars(term.right, out)


def _direct_vars(atom: Atom) -> list[str]:
    """Variables occurring as a direct (non-nested) argument."""
    return [a.name for a in atom.args if isinstance(a, Variable)]


def _atom_vars(atom: Atom) -> list[str]:
    out: list[str] = []
    for arg in atom.args:
        if isinstance(arg, Interval):
            continue
        _term_vars(arg, out)
    return out


def _literal_vars(lit: Literal) -> list[str]:
    if isinstance(lit, AtomLiteral):
        return _atom_vars(lit.atom)
    out: list[str] = []
    _term_vars(lit.left, out)
    _term_vars(lit.right, out)
    return out


def _is_anon(name: str) -> bool:
    return name.startswith("_")


def _scope_unsafe(
    bound: set[str],
    literals: list[Literal],
    extra_required: list[str],
) -> list[str]:
    """Unsafe variables in one binding scope.

    A variable is bound by a direct argument position of a positive atom
    literal.  Anonymous variables occurring only inside negated atoms are
    exempt (they read existentially).
    """
    bound = set(bound)
    for lit in literals:
        if isinstance(lit, AtomLiteral) and not lit.negated:
            bound.update(_direct_vars(lit.atom))
    required: list[str] = list(extra_required)
    negated_only: set[str] = set()
    positive: set[str] = set()
    for lit in literals:
        names = _literal_vars(lit)
        required.extend(names)
        if isinstance(lit, AtomLiteral) and lit.negated:
            negated_only.update(names)
        else:
            positive.update(names)
    unsafe: list[str] = []
    for name in dict.fromkeys(required):
        if name in bound:
            continue
        if _is_anon(name) and name in negated_only and name not in positive:
            continue
        unsafe.append(name)
    return unsafe


def check_safety(statement: Statement) -> list[str]:
    """Return the unsafe variable names of ``statement`` (empty means safe)."""
    if isinstance(statement, (Show,)):
        return []
    if isinstance(statement, Fact):
        return [v for v in dict.fromkeys(_atom_vars(statement.atom))]
    if isinstance(statement, Constraint):
        return _scope_unsafe(set(), list(statement.body), [])
    if isinstance(statement, Rule):
        literals = [i for i in statement.body if not isinstance(i, CountAggregate)]
        aggregates = [i for i in statement.body if isinstance(i, CountAggregate)]
        bound: set[str] = {agg.target.name for agg in aggregates}
        unsafe = _scope_unsafe(bound, literals, _atom_vars(statement.head))
        # Aggregate element scopes: outer bindings plus condition bindings.
        outer = set(bound)
        for lit in literals:
            if isinstance(lit, AtomLiteral) and not lit.negated:
                outer.update(_direct_vars(lit.atom))
        for agg in aggregates:
            for element in agg.elements:
                tuple_vars: list[str] = []
                for term in element.terms:
                    _term_vars(term, tuple_vars)
                unsafe.extend(
                    _scope_unsafe(outer, list(element.condition), tuple_vars)
                )
        return list(dict.fromkeys(unsafe))
    if isinstance(statement, Choice):
        unsafe = _scope_unsafe(set(), list(statement.body), [])
        outer: set[str] = set()
        for lit in statement.body:
            if isinstance(lit, AtomLiteral) and not lit.negated:
                outer.update(_direct_vars(lit.atom))
        for element in statement.elements:
            unsafe.extend(
                _scope_unsafe(outer, list(element.condition), _atom_vars(element.head))
            )
        return list(dict.fromkeys(unsafe))
    raise TypeError(f"not a statement: {statement!r}")


# ---------------------------------------------------------------------------
# Projection of anonymous variables under negation
# ---------------------------------------------------------------------------


class _Projector:
    """Rewrite ``not p(..., _, ...)`` into ``not _projN(<named args>)``.

    The dialect reads an anonymous variable under negation existentially
    (Codes 7/8: ``not plan(A, 1, _, U)``).  Each such literal gets an
    auxiliary projection predicate defined by a single positive rule, which
    keeps ground rules in normal form.
    """

    def __init__(self) -> None:
        self.counter = 0
        self.aux_rules: list[Rule] = []
        self.cache: dict[tuple, tuple[str, tuple[int, ...]]] = {}

    def rewrite_literal(self, lit: Literal) -> Literal:
        if not isinstance(lit, AtomLiteral) or not lit.negated:
            return lit
        anon_positions = [
            i
            for i, arg in enumerate(lit.atom.args)
            if isinstance(arg, Variable) and arg.anonymous
        ]
        if not anon_positions:
            return lit
        key = self._shape_key(lit.atom)
        if key not in self.cache:
            self.counter += 1
            name = f"_proj{self.counter}"
            keep = tuple(
                i for i in range(len(lit.atom.args)) if i not in anon_positions
            )
            body_args: list = []
            head_args: list[Variable] = []
            for i, arg in enumerate(lit.atom.args):
                if i in anon_positions:
                    body_args.append(arg)
                else:
                    var = Variable(f"V{i + 1}")
                    head_args.append(var)
                    body_args.append(var)
            self.aux_rules.append(
                Rule(
                    Atom(name, tuple(head_args)),
                    (AtomLiteral(Atom(lit.atom.predicate, tuple(body_args))),),
                )
            )
            self.cache[key] = (name, keep)
        name, keep = self.cache[key]
        return AtomLiteral(Atom(name, tuple(lit.atom.args[i] for i in keep)), negated=True)

    def _shape_key(self, atom: Atom) -> tuple:
        shape = tuple(
            "_" if isinstance(a, Variable) and a.anonymous else i
            for i, a in enumerate(atom.args)
        )
        return (atom.predicate, shape)

    def rewrite_literals(self, literals: tuple[Literal, ...]) -> tuple[Literal, ...]:
        return tuple(self.rewrite_literal(l) for l in literals)

    def rewrite_statement(self, statement: Statement) -> Statement:
        if isinstance(statement, Rule):
            body = tuple(
                CountAggregate(
                    item.target,
                    tuple(
                        CountElement(el.terms, self.rewrite_literals(el.condition))
                        for el in item.elements
                    ),
                )
                if isinstance(item, CountAggregate)
                else self.rewrite_literal(item)
                for item in statement.body
            )
            return Rule(statement.head, body)
        if isinstance(statement, Constraint):
            return Constraint(self.rewrite_literals(statement.body))
        if isinstance(statement, Choice):
            return Choice(
                statement.lower,
                statement.upper,
                tuple(
                    ChoiceElement(el.head, self.rewrite_literals(el.condition))
                    for el in statement.elements
                ),
                self.rewrite_literals(statement.body),
            )
        return statement


def normalize_program(program: Program) -> Program:
    """Insert projection rules for anonymous variables under negation."""
    projector = _Projector()
    out: list[Statement] = []
    for statement in program.statements:
        before = len(projector.aux_rules)
        rewritten = projector.rewrite_statement(statement)
        out.extend(projector.aux_rules[before:])
        out.append(rewritten)
    return Program(tuple(out))


# ---------------------------------------------------------------------------
# Instantiation engine
# ---------------------------------------------------------------------------


class _Store:
    """Derivable ground atoms indexed by (predicate, arity), in derivation order."""

    def __init__(self, table: AtomTable):
        self.table = table
        self.by_pred: dict[tuple[str, int], list[tuple[Value, ...]]] = {}
        self.members: set[GroundAtom] = set()

    def add(self, atom: GroundAtom) -> bool:
        if atom in self.members:
            return False
        self.members.add(atom)
        self.table.add(atom)
        self.by_pred.setdefault((atom.predicate, len(atom.args)), []).append(atom.args)
        return True

    def candidates(self, predicate: str, arity: int) -> list[tuple[Value, ...]]:
        return self.by_pred.get((predicate, arity), [])

    def __contains__(self, atom: GroundAtom) -> bool:
        return atom in self.members


def _arith_ready(term: Term, bound: set[str]) -> bool:
    names: list[str] = []
    _term_vars(term, names)
    return all(name in bound for name in names)


def _literal_ready(lit: Literal, bound: set[str]) -> bool:
    if isinstance(lit, Comparison):
        return _arith_ready(lit.left, bound) and _arith_ready(lit.right, bound)
    if lit.negated:
        return all(name in bound for name in _atom_vars(lit.atom))
    seen = set(bound)
    for arg in lit.atom.args:
        if isinstance(arg, Variable):
            seen.add(arg.name)
        elif isinstance(arg, Arith) and not _arith_ready(arg, seen):
            return False
    return True


def _unify(args: tuple, values: tuple[Value, ...], binding: Binding) -> Optional[Binding]:
    out = dict(binding)
    for term, value in zip(args, values):
        if isinstance(term, Variable):
            bound = out.get(term.name)
            if bound is None:
                out[term.name] = value
            elif bound != value:
                return None
        else:
            if evaluate_term(term, out) != value:
                return None
    return out


def ground_atom(atom: Atom, binding: Binding) -> GroundAtom:
    return GroundAtom(
        atom.predicate, tuple(evaluate_term(a, binding) for a in atom.args)
    )


def _iter_matches(
    store: _Store,
    literals: list[Literal],
    binding: Binding,
) -> Iterator[tuple[Binding, tuple[GroundAtom, ...], tuple[GroundAtom, ...]]]:
    """All extensions of ``binding`` satisfying the positive/comparison parts.

    Negative literals are grounded and collected, not evaluated.  Yields
    (binding, positive ground atoms, negative ground atoms).
    """

    def rec(pending: list[Literal], b: Binding, pos: tuple, neg: tuple):
        if not pending:
            yield b, pos, neg
            return
        bound = set(b)
        for idx, lit in enumerate(pending):
            if _literal_ready(lit, bound):
                break
        else:
            from .syntax import print_literal

            raise GroundingError(
                "cannot order body literals: "
                + ", ".join(print_literal(l) for l in pending)
            )
        rest = pending[:idx] + pending[idx + 1 :]
        if isinstance(lit, Comparison):
            if compare_values(
                evaluate_term(lit.left, b), lit.op, evaluate_term(lit.right, b)
            ):
                yield from rec(rest, b, pos, neg)
            return
        if lit.negated:
            yield from rec(rest, b, pos, neg + (ground_atom(lit.atom, b),))
            return
        arity = len(lit.atom.args)
        for values in store.candidates(lit.atom.predicate, arity):
            extended = _unify(lit.atom.args, values, b)
            if extended is not None:
                yield from rec(
                    rest,
                    extended,
                    pos + (GroundAtom(lit.atom.predicate, values),),
                    neg,
                )

    yield from rec(list(literals), binding, (), ())


def _expand_fact(fact: Fact) -> list[GroundAtom]:
    positions: list[list[Value]] = []
    for arg in fact.atom.args:
        if isinstance(arg, Interval):
            positions.append(list(range(arg.lo, arg.hi + 1)))
        else:
            positions.append([evaluate_term(arg, {})])
    if not positions:
        return [GroundAtom(fact.atom.predicate)]
    return [
        GroundAtom(fact.atom.predicate, combo)
        for combo in (tuple(c) for c in itertools.product(*positions))
    ]


def _split_rule_body(
    rule: Rule,
) -> tuple[list[Literal], Optional[CountAggregate]]:
    literals: list[Literal] = []
    aggregate: Optional[CountAggregate] = None
    for item in rule.body:
        if isinstance(item, CountAggregate):
            if aggregate is not None:
                raise GroundingError("at most one #count per rule is supported")
            aggregate = item
        else:
            literals.append(item)
    return literals, aggregate


def _count_elements(
    store: _Store, aggregate: CountAggregate, binding: Binding
) -> list[tuple[tuple[Value, ...], tuple[GroundAtom, ...], tuple[GroundAtom, ...]]]:
    """Ground (tuple-key, condition) instances, set semantics over identical entries."""
    seen: dict[tuple, None] = {}
    out = []
    for element in aggregate.elements:
        for b, pos, neg in _iter_matches(store, list(element.condition), binding):
            key = tuple(evaluate_term(t, b) for t in element.terms)
            entry = (key, pos, neg)
            marker = (key, tuple(sorted(map(str, pos))), tuple(sorted(map(str, neg))))
            if marker in seen:
                continue
            seen[marker] = None
            out.append(entry)
    return out


class _Grounder:
    def __init__(self, program: Program):
        self.program = normalize_program(program)
        for statement in self.program.statements:
            unsafe = check_safety(statement)
            if unsafe:
                raise UnsafeStatementError(statement, unsafe)
        self.table = AtomTable()
        self.store = _Store(self.table)
        self.shows: list[tuple[str, int]] = []

    # -- derivation fixpoint (ids assigned here, in first-seen order) --

    def derive(self) -> None:
        changed = True
        while changed:
            changed = False
            for statement in self.program.statements:
                if isinstance(statement, Fact):
                    for atom in _expand_fact(statement):
                        changed |= self.store.add(atom)
                elif isinstance(statement, Rule):
                    literals, aggregate = _split_rule_body(statement)
                    for b, _pos, _neg in _iter_matches(self.store, literals, {}):
                        if aggregate is None:
                            changed |= self.store.add(ground_atom(statement.head, b))
                        else:
                            elements = _count_elements(self.store, aggregate, b)
                            keys = {e[0] for e in elements}
                            for n in range(len(keys) + 1):
                                extended = dict(b)
                                extended[aggregate.target.name] = n
                                changed |= self.store.add(
                                    ground_atom(statement.head, extended)
                                )
                elif isinstance(statement, Choice):
                    for b, _pos, _neg in _iter_matches(
                        self.store, list(statement.body), {}
                    ):
                        for element in statement.elements:
                            for eb, _ep, _en in _iter_matches(
                                self.store, list(element.condition), b
                            ):
                                changed |= self.store.add(
                                    ground_atom(element.head, eb)
                                )

    # -- emission against the final derivable set --

    def emit(self) -> tuple[list[dict], bool]:
        instances: dict[tuple, dict] = {}
        conflict = False

        def resolve_neg(neg_atoms: tuple[GroundAtom, ...]) -> Optional[tuple[GroundAtom, ...]]:
            # Underivable atoms make the literal trivially satisfied.
            return tuple(a for a in neg_atoms if a in self.store)

        def add(kind: str, key: tuple, payload: dict) -> None:
            if key not in instances:
                payload["kind"] = kind
                instances[key] = payload

        for statement in self.program.statements:
            if isinstance(statement, Show):
                entry = (statement.predicate, statement.arity)
                if entry not in self.shows:
                    self.shows.append(entry)
            elif isinstance(statement, Fact):
                for atom in _expand_fact(statement):
                    add("fact", ("fact", atom), {"head": atom})
            elif isinstance(statement, Rule):
                literals, aggregate = _split_rule_body(statement)
                for b, pos, neg in _iter_matches(self.store, literals, {}):
                    kept_neg = resolve_neg(neg)
                    if aggregate is None:
                        head = ground_atom(statement.head, b)
                        add(
                            "normal",
                            ("normal", head, pos, kept_neg),
                            {"head": head, "pos": pos, "neg": kept_neg},
                        )
                    else:
                        raw = _count_elements(self.store, aggregate, b)
                        elements = []
                        for key, epos, eneg in raw:
                            elements.append((key, epos, resolve_neg(eneg)))
                        keys = {e[0] for e in raw}
                        for n in range(len(keys) + 1):
                            extended = dict(b)
                            extended[aggregate.target.name] = n
                            head = ground_atom(statement.head, extended)
                            add(
                                "count",
                                ("count", head, n, pos, kept_neg, tuple(elements)),
                                {
                                    "head": head,
                                    "required": n,
                                    "elements": list(elements),
                                    "pos": pos,
                                    "neg": kept_neg,
                                },
                            )
            elif isinstance(statement, Constraint):
                for b, pos, neg in _iter_matches(self.store, list(statement.body), {}):
                    kept_neg = resolve_neg(neg)
                    add(
                        "constraint",
                        ("constraint", pos, kept_neg),
                        {"pos": pos, "neg": kept_neg},
                    )
            elif isinstance(statement, Choice):
                for b, pos, neg in _iter_matches(self.store, list(statement.body), {}):
                    kept_neg = resolve_neg(neg)
                    elements = []
                    for element in statement.elements:
                        for eb, epos, eneg in _iter_matches(
                            self.store, list(element.condition), b
                        ):
                            head = ground_atom(element.head, eb)
                            entry = (head, epos, resolve_neg(eneg))
                            if entry not in elements:
                                elements.append(entry)
                    add(
                        "choice",
                        ("choice", statement.lower, statement.upper, pos, kept_neg,
                         tuple(elements)),
                        {
                            "lower": statement.lower,
                            "upper": statement.upper,
                            "elements": elements,
                            "pos": pos,
                            "neg": kept_neg,
                        },
                    )
        return list(instances.values()), conflict

    # -- fact propagation / simplification --

    def simplify(self, instances: list[dict]) -> tuple[list[dict], set[GroundAtom], bool]:
        facts: set[GroundAtom] = {
            inst["head"] for inst in instances if inst["kind"] == "fact"
        }
        conflict = False
        live = [inst for inst in instances if inst["kind"] != "fact"]
        changed = True
        while changed:
            changed = False
            kept: list[dict] = []
            for inst in live:
                kind = inst["kind"]
                if kind in ("normal", "constraint", "count"):
                    if any(a in facts for a in inst["neg"]):
                        changed = True
                        continue  # body can never hold
                    pos = tuple(a for a in inst["pos"] if a not in facts)
                    if len(pos) != len(inst["pos"]):
                        changed = True
                        inst["pos"] = pos
                    if kind == "normal":
                        if inst["head"] in facts:
                            changed = True
                            continue  # redundant: head already a fact
                        if not inst["pos"] and not inst["neg"]:
                            facts.add(inst["head"])
                            changed = True
                            continue
                    elif kind == "constraint":
                        if not inst["pos"] and not inst["neg"]:
                            conflict = True
                    else:  # count
                        new_elements = []
                        dropped = False
                        for key, epos, eneg in inst["elements"]:
                            if any(a in facts for a in eneg):
                                dropped = True
                                continue
                            stripped = tuple(a for a in epos if a not in facts)
                            if len(stripped) != len(epos):
                                dropped = True
                            new_elements.append((key, stripped, eneg))
                        if dropped:
                            changed = True
                            inst["elements"] = new_elements
                        max_count = len({e[0] for e in inst["elements"]})
                        if inst["required"] > max_count:
                            changed = True
                            continue  # can never reach the required count
                        if inst["head"] in facts:
                            changed = True
                            continue
                    kept.append(inst)
                elif kind == "choice":
                    if any(a in facts for a in inst["neg"]):
                        changed = True
                        continue
                    pos = tuple(a for a in inst["pos"] if a not in facts)
                    if len(pos) != len(inst["pos"]):
                        changed = True
                        inst["pos"] = pos
                    new_elements = []
                    dropped = False
                    for head, epos, eneg in inst["elements"]:
                        if any(a in facts for a in eneg):
                            dropped = True
                            continue
                        stripped = tuple(a for a in epos if a not in facts)
                        if len(stripped) != len(epos):
                            dropped = True
                        new_elements.append((head, stripped, eneg))
                    if dropped:
                        changed = True
                        inst["elements"] = new_elements
                    kept.append(inst)
                else:
                    kept.append(inst)
            live = kept
        return live, facts, conflict

    def run(self) -> GroundProgram:
        self.derive()
        instances, _ = self.emit()
        live, facts, conflict = self.simplify(instances)

        ids = self.table.id_of
        rules: list[GroundRule] = []
        # Facts come out as empty-body normal rules, in table order.
        fact_ids = sorted(ids(a) for a in facts)
        for idx in fact_ids:
            rules.append(GroundNormal(idx, (), ()))
        seen: set[tuple] = set()
        for inst in live:
            kind = inst["kind"]
            if kind == "normal":
                rule: GroundRule = GroundNormal(
                    ids(inst["head"]),
                    tuple(ids(a) for a in inst["pos"]),
                    tuple(ids(a) for a in inst["neg"]),
                )
            elif kind == "constraint":
                rule = GroundConstraint(
                    tuple(ids(a) for a in inst["pos"]),
                    tuple(ids(a) for a in inst["neg"]),
                )
            elif kind == "choice":
                rule = GroundChoice(
                    inst["lower"],
                    inst["upper"],
                    tuple(
                        GroundChoiceElement(
                            ids(h),
                            tuple(ids(a) for a in epos),
                            tuple(ids(a) for a in eneg),
                        )
                        for h, epos, eneg in inst["elements"]
                    ),
                    tuple(ids(a) for a in inst["pos"]),
                    tuple(ids(a) for a in inst["neg"]),
                )
            else:  # count
                rule = GroundCount(
                    ids(inst["head"]),
                    inst["required"],
                    tuple(
                        GroundCountElement(
                            key,
                            tuple(ids(a) for a in epos),
                            tuple(ids(a) for a in eneg),
                        )
                        for key, epos, eneg in inst["elements"]
                    ),
                    tuple(ids(a) for a in inst["pos"]),
                    tuple(ids(a) for a in inst["neg"]),
                )
            marker = (type(rule).__name__, rule)
            if marker in seen:
                continue
            seen.add(marker)
            rules.append(rule)
        return GroundProgram(
            atoms=self.table,
            rules=rules,
            shows=self.shows,
            facts=frozenset(fact_ids),
            conflict=conflict,
        )


def ground(program: Program) -> GroundProgram:
    """Ground ``program`` into a variable-free :class:`GroundProgram`."""
    return _Grounder(program).run()


# ---------------------------------------------------------------------------
# Debug dump
# ---------------------------------------------------------------------------


def dump_ground(g: GroundProgram) -> str:
    """One rule per line, atoms rendered in source syntax."""

    def name(idx: int) -> str:
        return str(g.atoms.atom_of(idx))

    def body(pos: tuple[int, ...], neg: tuple[int, ...]) -> str:
        parts = [name(i) for i in pos] + [f"not {name(i)}" for i in neg]
        return ", ".join(parts)

    lines: list[str] = []
    for rule in g.rules:
        if isinstance(rule, GroundNormal):
            if not rule.pos and not rule.neg:
                lines.append(f"{name(rule.head)}.")
            else:
                lines.append(f"{name(rule.head)} :- {body(rule.pos, rule.neg)}.")
        elif isinstance(rule, GroundConstraint):
            lines.append(f":- {body(rule.pos, rule.neg)}.")
        elif isinstance(rule, GroundChoice):
            elements = "; ".join(
                name(el.head)
                + (
                    ": " + body(el.cond_pos, el.cond_neg)
                    if el.cond_pos or el.cond_neg
                    else ""
                )
                for el in rule.elements
            )
            text = f"{rule.lower}{{{elements}}}{rule.upper}"
            if rule.pos or rule.neg:
                text += f" :- {body(rule.pos, rule.neg)}"
            lines.append(text + ".")
        elif isinstance(rule, GroundCount):
            elements = "; ".join(
                ",".join(str(v) for v in el.key)
                + (
                    ": " + body(el.cond_pos, el.cond_neg)
                    if el.cond_pos or el.cond_neg
                    else ""
                )
                for el in rule.elements
            )
            text = f"{name(rule.head)} :- {rule.required} = #count{{{elements}}}"
            rest = body(rule.pos, rule.neg)
            if rest:
                text += f", {rest}"
            lines.append(text + ".")
    for predicate, arity in g.shows:
        lines.append(f"#show {predicate}/{arity}.")
    return "\n".join(lines) + ("\n" if lines else "")
