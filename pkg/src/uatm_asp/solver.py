"""Stable-model enumeration for ground programs.

The search is DPLL-style over the Clark completion of the ground program:
choice rules are normalized away with hidden complement atoms, rule bodies get
auxiliary variables, and unit propagation runs on the resulting clauses with
two watched literals per clause.  Cardinality bounds of small choice rules are
additionally encoded as clauses so the search does not thrash; everything else
(remaining bounds, ``#count`` rules) is checked on total assignments.  Every
total assignment that survives those checks is verified stable with the
Gelfond-Lifschitz reduct before it is emitted, so only answer sets escape.

Decisions always pick the lowest unassigned atom id and try true first, which
makes enumeration order deterministic.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Union

from .grounding import (
    GroundAtom,
    GroundChoice,
    GroundConstraint,
    GroundCount,
    GroundNormal,
    GroundProgram,
    atom_sort_key,
)

ALL: Optional[int] = None  # sentinel for "enumerate every model"


class SolverBudgetError(Exception):
    """Raised when the configured decision budget is exhausted."""


class SolveStatus(Enum):
    SATISFIABLE = "SATISFIABLE"
    UNSATISFIABLE = "UNSATISFIABLE"


@dataclass(frozen=True)
class AnswerSet:
    atoms: frozenset[int]
    symbols: tuple[GroundAtom, ...]  # all visible atoms, sorted
    projected: tuple[GroundAtom, ...]  # filtered by #show, sorted


@dataclass
class SolveStats:
    models: int = 0
    decisions: int = 0
    wall_time: float = 0.0
    solve_time: float = 0.0
    first_model_time: Optional[float] = None


@dataclass
class SolveResult:
    status: SolveStatus
    models: list[AnswerSet]
    exhausted: bool
    stats: SolveStats


# ---------------------------------------------------------------------------
# Reduct machinery (shared by solve's internal stability check)
# ---------------------------------------------------------------------------

DefiniteRule = tuple[int, tuple[int, ...]]


def gl_reduct(g: GroundProgram, candidate: frozenset[int]) -> list[DefiniteRule]:
    """Gelfond-Lifschitz reduct as a definite program.

    Normal rules lose their negative literals or vanish; choice rules
    contribute support rules for the chosen heads.  Constraints and count
    rules are excluded (checked separately).
    """
    reduct: list[DefiniteRule] = []
    for rule in g.rules:
        if isinstance(rule, GroundNormal):
            if any(m in candidate for m in rule.neg):
                continue
            reduct.append((rule.head, rule.pos))
        elif isinstance(rule, GroundChoice):
            if any(m in candidate for m in rule.neg):
                continue
            for element in rule.elements:
                if element.head not in candidate:
                    continue
                if any(m in candidate for m in element.cond_neg):
                    continue
                reduct.append((element.head, rule.pos + element.cond_pos))
    return reduct


def least_model(definite: list[DefiniteRule]) -> frozenset[int]:
    """Least model of a negation-free program via counter-based fixpoint."""
    waiting: dict[int, list[int]] = {}
    counts: list[int] = []
    derived: set[int] = set()
    queue: list[int] = []
    for idx, (head, pos) in enumerate(definite):
        counts.append(len(pos))
        if not pos:
            if head not in derived:
                derived.add(head)
                queue.append(head)
        else:
            for p in set(pos):
                waiting.setdefault(p, []).append(idx)
    # Count duplicate premises once per occurrence; use multiset semantics.
    for idx, (head, pos) in enumerate(definite):
        counts[idx] = len(pos)
    satisfied: list[set[int]] = [set() for _ in definite]
    while queue:
        atom = queue.pop()
        for idx in waiting.get(atom, ()):
            head, pos = definite[idx]
            if atom in satisfied[idx]:
                continue
            satisfied[idx].add(atom)
            counts[idx] -= sum(1 for p in pos if p == atom)
            if counts[idx] <= 0 and head not in derived:
                derived.add(head)
                queue.append(head)
    return frozenset(derived)


def eval_aggregate(elements, candidate: frozenset[int]) -> int:
    """Cardinality of distinct tuple keys whose condition holds."""
    keys = set()
    for element in elements:
        if element.key in keys:
            continue
        if all(p in candidate for p in element.cond_pos) and not any(
            m in candidate for m in element.cond_neg
        ):
            keys.add(element.key)
    return len(keys)


def _body_holds(pos, neg, candidate: frozenset[int]) -> bool:
    return all(p in candidate for p in pos) and not any(m in candidate for m in neg)


def is_stable(
    g: GroundProgram, candidate: frozenset[int]
) -> tuple[bool, Optional[str]]:
    """Check the stable-model definition; returns (ok, diagnosis)."""

    def name(idx: int) -> str:
        return str(g.atoms.atom_of(idx))

    if g.conflict:
        return False, "program contains an unconditionally violated constraint"
    for rule in g.rules:
        if isinstance(rule, GroundNormal):
            if _body_holds(rule.pos, rule.neg, candidate) and rule.head not in candidate:
                return False, f"unsatisfied rule with head {name(rule.head)}"
        elif isinstance(rule, GroundConstraint):
            if _body_holds(rule.pos, rule.neg, candidate):
                body = [name(p) for p in rule.pos] + [f"not {name(m)}" for m in rule.neg]
                return False, "violated constraint :- " + ", ".join(body)
        elif isinstance(rule, GroundChoice):
            if _body_holds(rule.pos, rule.neg, candidate):
                chosen = sum(
                    1
                    for el in rule.elements
                    if el.head in candidate
                    and _body_holds(el.cond_pos, el.cond_neg, candidate)
                )
                if not rule.lower <= chosen <= rule.upper:
                    return False, (
                        f"choice bound {rule.lower}..{rule.upper} violated "
                        f"(chose {chosen})"
                    )
        elif isinstance(rule, GroundCount):
            fired = (
                _body_holds(rule.pos, rule.neg, candidate)
                and eval_aggregate(rule.elements, candidate) == rule.required
            )
            if fired and rule.head not in candidate:
                return False, f"unsatisfied count rule with head {name(rule.head)}"
    reduct = gl_reduct(g, candidate)
    for rule in g.rules:
        if isinstance(rule, GroundCount):
            if (
                _body_holds(rule.pos, rule.neg, candidate)
                and eval_aggregate(rule.elements, candidate) == rule.required
            ):
                reduct.append((rule.head, ()))
    fixpoint = least_model(reduct)
    if fixpoint != candidate:
        extra = sorted(candidate - fixpoint)
        missing = sorted(fixpoint - candidate)
        if extra:
            return False, f"unfounded atom {name(extra[0])}"
        return False, f"candidate misses derivable atom {name(missing[0])}"
    return True, None


# ---------------------------------------------------------------------------
# Clause compilation
# ---------------------------------------------------------------------------


def _true(var: int) -> int:
    return 2 * var


def _false(var: int) -> int:
    return 2 * var + 1


def _negate(lit: int) -> int:
    return lit ^ 1


_BOUND_CLAUSE_BUDGET = 5000


class _Compiled:
    def __init__(self, g: GroundProgram):
        self.g = g
        self.n_real = len(g.atoms)
        self.nvars = self.n_real
        self.clauses: list[list[int]] = []
        self.empty_clause = g.conflict
        self.count_rules: list[GroundCount] = [
            r for r in g.rules if isinstance(r, GroundCount)
        ]
        self.choices: list[GroundChoice] = [
            r for r in g.rules if isinstance(r, GroundChoice)
        ]
        count_heads = {r.head for r in self.count_rules}
        defined: set[int] = set()

        bodies_for: dict[int, list[int]] = {}

        def new_var() -> int:
            var = self.nvars
            self.nvars += 1
            return var

        def add_clause(lits: list[int]) -> None:
            seen: set[int] = set()
            out: list[int] = []
            for lit in lits:
                if _negate(lit) in seen:
                    return  # tautology
                if lit not in seen:
                    seen.add(lit)
                    out.append(lit)
            if not out:
                self.empty_clause = True
                return
            self.clauses.append(out)

        def add_rule(head: int, body_lits: list[int]) -> None:
            defined.add(head)
            bvar = new_var()
            for lit in body_lits:
                add_clause([_false(bvar), lit])
            add_clause([_true(bvar)] + [_negate(l) for l in body_lits])
            add_clause([_false(bvar), _true(head)])
            bodies_for.setdefault(head, []).append(bvar)

        for rule in g.rules:
            if isinstance(rule, GroundNormal):
                lits = [_true(p) for p in rule.pos] + [_false(m) for m in rule.neg]
                add_rule(rule.head, lits)
            elif isinstance(rule, GroundConstraint):
                add_clause(
                    [_false(p) for p in rule.pos] + [_true(m) for m in rule.neg]
                )
            elif isinstance(rule, GroundChoice):
                base = [_true(p) for p in rule.pos] + [_false(m) for m in rule.neg]
                for element in rule.elements:
                    cond = [_true(p) for p in element.cond_pos] + [
                        _false(m) for m in element.cond_neg
                    ]
                    comp = new_var()
                    add_rule(element.head, base + cond + [_false(comp)])
                    add_rule(comp, base + cond + [_false(element.head)])
                self._encode_bounds(rule, base, add_clause)

        # Completion "only if": an atom not derivable by any rule body is false.
        for var in range(self.n_real):
            if var in count_heads:
                continue  # may be supported by an aggregate instead
            bodies = bodies_for.get(var, [])
            add_clause([_false(var)] + [_true(b) for b in bodies])

        # Atoms defined solely by count rules are evaluated, not decided.
        self.derived: list[int] = sorted(count_heads - defined)
        self.derived_set = set(self.derived)
        self.count_rules_for: dict[int, list[GroundCount]] = {}
        for rule in self.count_rules:
            self.count_rules_for.setdefault(rule.head, []).append(rule)

    def _encode_bounds(self, rule: GroundChoice, base: list[int], add_clause) -> None:
        if any(el.cond_pos or el.cond_neg for el in rule.elements):
            return  # conditional elements: bound checked on total assignments
        heads = sorted({el.head for el in rule.elements})
        gate = [_negate(l) for l in base]
        n = len(heads)
        if rule.lower > n:
            add_clause(list(gate))  # bound can never be met while the body holds
            return
        cost = 0
        if rule.upper < n:
            cost += math.comb(n, rule.upper + 1)
        if rule.lower > 0:
            cost += math.comb(n, n - rule.lower + 1)
        if cost > _BOUND_CLAUSE_BUDGET:
            return
        if rule.upper < n:
            for subset in _combinations(heads, rule.upper + 1):
                add_clause(gate + [_false(h) for h in subset])
        if rule.lower > 0:
            for subset in _combinations(heads, n - rule.lower + 1):
                add_clause(gate + [_true(h) for h in subset])


def _combinations(items: list[int], size: int):
    import itertools

    return itertools.combinations(items, size)


# ---------------------------------------------------------------------------
# DPLL search with two watched literals
# ---------------------------------------------------------------------------


class _Search:
    def __init__(self, compiled: _Compiled, max_decisions: int):
        self.c = compiled
        self.max_decisions = max_decisions
        self.assign: list[Optional[bool]] = [None] * compiled.nvars
        self.trail: list[int] = []
        self.qhead = 0
        self.watches: dict[int, list[int]] = {}
        self.decisions = 0
        for idx, clause in enumerate(compiled.clauses):
            if len(clause) == 1:
                continue
            for lit in clause[:2]:
                self.watches.setdefault(lit, []).append(idx)
        self.units = [c[0] for c in compiled.clauses if len(c) == 1]

    def value(self, lit: int) -> Optional[bool]:
        val = self.assign[lit >> 1]
        if val is None:
            return None
        return val == (lit & 1 == 0)

    def enqueue(self, lit: int) -> bool:
        val = self.value(lit)
        if val is False:
            return False
        if val is None:
            self.assign[lit >> 1] = lit & 1 == 0
            self.trail.append(lit)
        return True

    def propagate(self) -> bool:
        """Unit propagation; returns False on conflict."""
        clauses = self.c.clauses
        while self.qhead < len(self.trail):
            lit = self.trail[self.qhead]
            self.qhead += 1
            falsified = _negate(lit)
            watch_list = self.watches.get(falsified)
            if not watch_list:
                continue
            kept: list[int] = []
            i = 0
            while i < len(watch_list):
                idx = watch_list[i]
                i += 1
                clause = clauses[idx]
                # Ensure falsified literal sits at position 1.
                if clause[0] == falsified:
                    clause[0], clause[1] = clause[1], clause[0]
                other = clause[0]
                if self.value(other) is True:
                    kept.append(idx)
                    continue
                moved = False
                for j in range(2, len(clause)):
                    if self.value(clause[j]) is not False:
                        clause[1], clause[j] = clause[j], clause[1]
                        self.watches.setdefault(clause[1], []).append(idx)
                        moved = True
                        break
                if moved:
                    continue
                kept.append(idx)
                if not self.enqueue(other):
                    kept.extend(watch_list[i:])
                    self.watches[falsified] = kept
                    return False
            self.watches[falsified] = kept
        return True

    def backtrack_to(self, mark: int) -> None:
        while len(self.trail) > mark:
            lit = self.trail.pop()
            self.assign[lit >> 1] = None
        self.qhead = mark


def _run_search(
    g: GroundProgram,
    compiled: _Compiled,
    max_models: Optional[int],
    max_decisions: int,
    on_model,
) -> tuple[bool, int]:
    """DFS enumeration; returns (exhausted, decisions)."""
    if compiled.empty_clause:
        return True, 0
    search = _Search(compiled, max_decisions)
    for lit in search.units:
        if not search.enqueue(lit):
            return True, 0
    if not search.propagate():
        return True, 0

    decision_stack: list[tuple[int, int, bool]] = []  # (var, trail mark, flipped)
    found = 0

    def next_decision_var() -> Optional[int]:
        for var in range(compiled.n_real):
            if search.assign[var] is None and var not in compiled.derived_set:
                return var
        return None

    def leaf_ok() -> bool:
        # Evaluate aggregate-defined atoms from the current assignment.
        values: dict[int, bool] = {}
        for var in compiled.derived:
            fired = False
            for rule in compiled.count_rules_for[var]:
                if _count_rule_fires(rule, search):
                    fired = True
                    break
            values[var] = fired
        for var, val in values.items():
            current = search.assign[var]
            if current is not None and current != val:
                return False
            if current is None and not search.enqueue(_true(var) if val else _false(var)):
                return False
        if not search.propagate():
            return False
        # Mixed heads: a fired count rule must see its head true.
        for rule in compiled.count_rules:
            if rule.head in compiled.derived_set:
                continue
            if _count_rule_fires(rule, search) and search.assign[rule.head] is not True:
                return False
        for choice in compiled.choices:
            if not _choice_bound_ok(choice, search):
                return False
        return True

    while True:
        conflict = not search.propagate()
        if not conflict:
            var = next_decision_var()
            if var is None:
                mark = len(search.trail)
                if leaf_ok():
                    candidate = frozenset(
                        v for v in range(compiled.n_real) if search.assign[v]
                    )
                    ok, _diag = is_stable(g, candidate)
                    if ok:
                        found += 1
                        on_model(candidate)
                        if max_models is not None and found >= max_models:
                            return False, search.decisions
                search.backtrack_to(mark)
                conflict = True
            else:
                search.decisions += 1
                if search.decisions > max_decisions:
                    raise SolverBudgetError(
                        f"decision budget of {max_decisions} exceeded"
                    )
                decision_stack.append((var, len(search.trail), False))
                search.enqueue(_true(var))
                continue
        if conflict:
            while decision_stack and decision_stack[-1][2]:
                var, mark, _ = decision_stack.pop()
                search.backtrack_to(mark)
            if not decision_stack:
                return True, search.decisions
            var, mark, _ = decision_stack.pop()
            search.backtrack_to(mark)
            decision_stack.append((var, mark, True))
            search.enqueue(_false(var))


def _count_rule_fires(rule: GroundCount, search: _Search) -> bool:
    def truth(var: int) -> bool:
        val = search.assign[var]
        if val is None:
            raise SolverBudgetError(
                "aggregate over undetermined atom; nested aggregate "
                "dependencies are not supported"
            )
        return val

    if not all(truth(p) for p in rule.pos):
        return False
    if any(truth(m) for m in rule.neg):
        return False
    keys = set()
    for element in rule.elements:
        if element.key in keys:
            continue
        if all(truth(p) for p in element.cond_pos) and not any(
            truth(m) for m in element.cond_neg
        ):
            keys.add(element.key)
    return len(keys) == rule.required


def _choice_bound_ok(rule: GroundChoice, search: _Search) -> bool:
    def truth(var: int) -> bool:
        return bool(search.assign[var])

    if not all(truth(p) for p in rule.pos):
        return True
    if any(truth(m) for m in rule.neg):
        return True
    chosen = 0
    counted: set[int] = set()
    for element in rule.elements:
        if element.head in counted:
            continue
        if (
            truth(element.head)
            and all(truth(p) for p in element.cond_pos)
            and not any(truth(m) for m in element.cond_neg)
        ):
            counted.add(element.head)
            chosen += 1
    return rule.lower <= chosen <= rule.upper


# ---------------------------------------------------------------------------
# Public entry point
# ---------------------------------------------------------------------------


def _project(g: GroundProgram, candidate: frozenset[int]) -> AnswerSet:
    visible = sorted(
        (g.atoms.atom_of(i) for i in candidate if g.visible(i)), key=atom_sort_key
    )
    if g.shows:
        shown = {(p, a) for p, a in g.shows}
        projected = tuple(
            atom for atom in visible if (atom.predicate, len(atom.args)) in shown
        )
    else:
        projected = tuple(visible)
    return AnswerSet(
        atoms=candidate, symbols=tuple(visible), projected=projected
    )


def solve(
    g: GroundProgram,
    max_models: Optional[int] = 1,
    max_decisions: int = 5_000_000,
) -> SolveResult:
    """Enumerate stable models of ``g`` (all of them when ``max_models=ALL``)."""
    start = time.perf_counter()
    stats = SolveStats()
    models: list[AnswerSet] = []

    def on_model(candidate: frozenset[int]) -> None:
        models.append(_project(g, candidate))
        if stats.first_model_time is None:
            stats.first_model_time = time.perf_counter() - start

    compiled = _Compiled(g)
    solve_start = time.perf_counter()
    exhausted, decisions = _run_search(
        g, compiled, max_models, max_decisions, on_model
    )
    now = time.perf_counter()
    stats.models = len(models)
    stats.decisions = decisions
    stats.solve_time = now - solve_start
    stats.wall_time = now - start
    status = SolveStatus.SATISFIABLE if models else SolveStatus.UNSATISFIABLE
    return SolveResult(status=status, models=models, exhausted=exhausted, stats=stats)
