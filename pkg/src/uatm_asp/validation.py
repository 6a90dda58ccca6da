"""Independent validation of answer sets.

This module re-checks a candidate answer set against a ground program without
reusing the solver's machinery: rule satisfaction is checked directly from the
definitions, foundedness is established with a naive iterate-to-fixpoint
computation over a freshly built reduct, and every true atom is additionally
traced back to facts through the positive dependency graph.  A model emitted
by the solver should always validate; the point of the duplication is that a
bug would have to appear in two unrelated implementations to go unnoticed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .grounding import (
    GroundChoice,
    GroundConstraint,
    GroundCount,
    GroundNormal,
    GroundProgram,
)


@dataclass
class ValidationReport:
    valid: bool
    checked_rules: int
    failures: list[str] = field(default_factory=list)
    unfounded: tuple[str, ...] = ()
    unreachable: tuple[str, ...] = ()

    def summary(self) -> str:
        if self.valid:
            return f"valid answer set ({self.checked_rules} rules checked)"
        return "invalid answer set: " + "; ".join(self.failures[:3])


def _count_value(elements, true_atoms: frozenset[int]) -> int:
    keys = set()
    for el in elements:
        if el.key in keys:
            continue
        if all(p in true_atoms for p in el.cond_pos) and all(
            m not in true_atoms for m in el.cond_neg
        ):
            keys.add(el.key)
    return len(keys)


def validate_answer_set(g: GroundProgram, atoms: frozenset[int]) -> ValidationReport:
    """Full check of the answer-set conditions for ``atoms``."""
    failures: list[str] = []

    def name(idx: int) -> str:
        return str(g.atoms.atom_of(idx))

    if g.conflict:
        failures.append("program contains an always-violated constraint")

    # 1. Classical satisfaction, rule by rule.
    checked = 0
    supported_by_aggregate: set[int] = set()
    for rule in g.rules:
        checked += 1
        if isinstance(rule, GroundNormal):
            holds = all(p in atoms for p in rule.pos) and all(
                m not in atoms for m in rule.neg
            )
            if holds and rule.head not in atoms:
                failures.append(f"rule for {name(rule.head)} fires but head is false")
        elif isinstance(rule, GroundConstraint):
            holds = all(p in atoms for p in rule.pos) and all(
                m not in atoms for m in rule.neg
            )
            if holds:
                failures.append("integrity constraint violated")
        elif isinstance(rule, GroundChoice):
            holds = all(p in atoms for p in rule.pos) and all(
                m not in atoms for m in rule.neg
            )
            if holds:
                chosen = {
                    el.head
                    for el in rule.elements
                    if el.head in atoms
                    and all(p in atoms for p in el.cond_pos)
                    and all(m not in atoms for m in el.cond_neg)
                }
                if not rule.lower <= len(chosen) <= rule.upper:
                    failures.append(
                        f"choice selected {len(chosen)} heads outside "
                        f"{rule.lower}..{rule.upper}"
                    )
        elif isinstance(rule, GroundCount):
            holds = all(p in atoms for p in rule.pos) and all(
                m not in atoms for m in rule.neg
            )
            if holds and _count_value(rule.elements, atoms) == rule.required:
                supported_by_aggregate.add(rule.head)
                if rule.head not in atoms:
                    failures.append(
                        f"count rule for {name(rule.head)} fires but head is false"
                    )

    # 2. Foundedness: naive fixpoint over the reduct built from scratch.
    reduct: list[tuple[int, tuple[int, ...]]] = []
    for rule in g.rules:
        if isinstance(rule, GroundNormal):
            if all(m not in atoms for m in rule.neg):
                reduct.append((rule.head, rule.pos))
        elif isinstance(rule, GroundChoice):
            if all(m not in atoms for m in rule.neg):
                for el in rule.elements:
                    if el.head in atoms and all(
                        m not in atoms for m in el.cond_neg
                    ):
                        reduct.append((el.head, rule.pos + el.cond_pos))
    for head in supported_by_aggregate & atoms:
        reduct.append((head, ()))

    closure: set[int] = set()
    changed = True
    while changed:
        changed = False
        for head, pos in reduct:
            if head not in closure and all(p in closure for p in pos):
                closure.add(head)
                changed = True
    unfounded = tuple(sorted(name(a) for a in atoms - closure))
    if unfounded:
        failures.append(f"unfounded atoms: {', '.join(unfounded[:5])}")
    derivable_but_absent = tuple(sorted(name(a) for a in closure - atoms))
    if derivable_but_absent:
        failures.append(
            f"derivable atoms missing: {', '.join(derivable_but_absent[:5])}"
        )

    # 3. Reachability: every true atom must be connected to the facts through
    # positive rule dependencies, confirmed with a premise-counting worklist.
    unreachable: tuple[str, ...] = ()
    if not unfounded and not derivable_but_absent:
        remaining: list[int] = []
        waiting: dict[int, list[int]] = {}
        reachable: set[int] = set()
        frontier: list[int] = []
        for idx, (head, pos) in enumerate(reduct):
            remaining.append(len(set(pos)))
            if not pos:
                frontier.append(idx)
            for p in set(pos):
                waiting.setdefault(p, []).append(idx)
        seen_rules: set[int] = set()
        while frontier:
            idx = frontier.pop()
            if idx in seen_rules:
                continue
            seen_rules.add(idx)
            head = reduct[idx][0]
            if head in reachable:
                continue
            reachable.add(head)
            for dependent in waiting.get(head, ()):
                remaining[dependent] -= 1
                if remaining[dependent] == 0:
                    frontier.append(dependent)
        unreachable = tuple(sorted(name(a) for a in atoms - reachable))
        if unreachable:
            failures.append(
                f"atoms unreachable from facts: {', '.join(unreachable[:5])}"
            )

    return ValidationReport(
        valid=not failures,
        checked_rules=checked,
        failures=failures,
        unfounded=unfounded,
        unreachable=unreachable,
    )
