"""Cross-check the solver against the brute-force reference on random programs."""

import random

import pytest

from uatm_asp.solver import ALL, solve

from oracle_reference import random_ground_program, stable_models_bruteforce

SEEDS = range(500)


@pytest.mark.parametrize("seed", SEEDS)
def test_solver_matches_bruteforce(seed):
    rng = random.Random(seed)
    g = random_ground_program(rng)
    expected = stable_models_bruteforce(g)
    result = solve(g, max_models=ALL)
    got = {m.atoms for m in result.models}
    assert got == expected
    assert result.exhausted
