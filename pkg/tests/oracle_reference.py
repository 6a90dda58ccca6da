"""Brute-force reference semantics used to cross-check the solver.

Everything here is written from the definitions, on purpose sharing no code
with the package under test: answer sets are found by enumerating every
subset of the (small) atom universe and checking the stability conditions
with a naive fixpoint.  Only usable for programs with a handful of atoms.
"""

from __future__ import annotations

import random

from uatm_asp.grounding import (
    AtomTable,
    GroundAtom,
    GroundChoice,
    GroundChoiceElement,
    GroundConstraint,
    GroundCount,
    GroundCountElement,
    GroundNormal,
    GroundProgram,
)


def _holds(pos, neg, X: frozenset[int]) -> bool:
    return all(p in X for p in pos) and all(m not in X for m in neg)


def _count(elements, X: frozenset[int]) -> int:
    seen = set()
    for el in elements:
        if el.key not in seen and _holds(el.cond_pos, el.cond_neg, X):
            seen.add(el.key)
    return len(seen)


def is_answer_set(g: GroundProgram, X: frozenset[int]) -> bool:
    if g.conflict:
        return False
    aggregate_facts = set()
    for rule in g.rules:
        if isinstance(rule, GroundConstraint):
            if _holds(rule.pos, rule.neg, X):
                return False
        elif isinstance(rule, GroundNormal):
            if _holds(rule.pos, rule.neg, X) and rule.head not in X:
                return False
        elif isinstance(rule, GroundChoice):
            if _holds(rule.pos, rule.neg, X):
                chosen = len(
                    {
                        el.head
                        for el in rule.elements
                        if el.head in X and _holds(el.cond_pos, el.cond_neg, X)
                    }
                )
                if chosen < rule.lower or chosen > rule.upper:
                    return False
        elif isinstance(rule, GroundCount):
            fired = (
                _holds(rule.pos, rule.neg, X)
                and _count(rule.elements, X) == rule.required
            )
            if fired:
                if rule.head not in X:
                    return False
                aggregate_facts.add(rule.head)
    # Foundedness: least model of the reduct must equal X exactly.
    reduct: list[tuple[int, tuple[int, ...]]] = [(a, ()) for a in aggregate_facts]
    for rule in g.rules:
        if isinstance(rule, GroundNormal):
            if all(m not in X for m in rule.neg):
                reduct.append((rule.head, rule.pos))
        elif isinstance(rule, GroundChoice):
            if all(m not in X for m in rule.neg):
                for el in rule.elements:
                    if el.head in X and all(m not in X for m in el.cond_neg):
                        reduct.append((el.head, rule.pos + el.cond_pos))
    closure: set[int] = set()
    while True:
        grown = False
        for head, pos in reduct:
            if head not in closure and all(p in closure for p in pos):
                closure.add(head)
                grown = True
        if not grown:
            break
    return frozenset(closure) == X


def stable_models_bruteforce(g: GroundProgram) -> set[frozenset[int]]:
    n = len(g.atoms)
    assert n <= 14, "brute force oracle only works on tiny programs"
    found = set()
    for bits in range(1 << n):
        X = frozenset(i for i in range(n) if bits >> i & 1)
        if is_answer_set(g, X):
            found.add(X)
    return found


def random_ground_program(rng: random.Random) -> GroundProgram:
    """Small random ground program over atoms p(0)..p(k-1)."""
    n = rng.randint(2, 8)
    table = AtomTable()
    ids = [table.add(GroundAtom("p", (i,))) for i in range(n)]

    def some(pool, lo=0, hi=2):
        k = rng.randint(lo, min(hi, len(pool)))
        return tuple(rng.sample(pool, k))

    rules = []
    # Count rules first so their heads can be kept out of element conditions.
    count_heads: list[int] = []
    if n >= 4 and rng.random() < 0.5:
        head = ids[-1]
        count_heads.append(head)
        body_pool = ids[:-1]
        elements = tuple(
            GroundCountElement(
                key=(j,),
                cond_pos=some(body_pool, 0, 1),
                cond_neg=some(body_pool, 0, 1),
            )
            for j in range(rng.randint(1, 3))
        )
        rules.append(
            GroundCount(
                head=head,
                required=rng.randint(0, len(elements)),
                elements=elements,
                pos=some(body_pool, 0, 1),
                neg=some(body_pool, 0, 1),
            )
        )
    plain = [i for i in ids if i not in count_heads]
    for _ in range(rng.randint(1, 6)):
        rules.append(
            GroundNormal(
                head=rng.choice(plain),
                pos=some(ids, 0, 2),
                neg=some(ids, 0, 2),
            )
        )
    for _ in range(rng.randint(0, 2)):
        rules.append(GroundConstraint(pos=some(ids, 0, 2), neg=some(ids, 0, 2)))
    for _ in range(rng.randint(0, 2)):
        element_heads = some(plain, 1, 3)
        elements = tuple(
            GroundChoiceElement(
                head=h,
                cond_pos=some(ids, 0, 1) if rng.random() < 0.3 else (),
                cond_neg=some(ids, 0, 1) if rng.random() < 0.3 else (),
            )
            for h in element_heads
        )
        lower = rng.randint(0, len(elements))
        upper = rng.randint(lower, len(elements))
        rules.append(
            GroundChoice(
                lower=lower,
                upper=upper,
                elements=elements,
                pos=some(ids, 0, 1),
                neg=some(ids, 0, 1),
            )
        )
    return GroundProgram(
        atoms=table,
        rules=tuple(rules),
        shows=(),
        facts=frozenset(),
        conflict=False,
    )
