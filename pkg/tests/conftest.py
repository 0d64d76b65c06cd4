import random

import pytest

from opacity_games.fixtures import ARENAS, arena
from opacity_games.generate import random_arena, random_blindfold_arena


@pytest.fixture(scope="session")
def fixtures():
    return {name: arena(name) for name in ARENAS}


def small_arenas(count: int, seed: int = 0):
    """The seeded random suite used for oracle comparisons."""
    rng = random.Random(seed)
    for _ in range(count):
        yield random_arena(rng.randint(1, 6), rng.randint(1, 2), rng.randint(1, 3), rng)


def blindfold_arenas(count: int, seed: int = 1):
    rng = random.Random(seed)
    for _ in range(count):
        yield random_blindfold_arena(rng.randint(1, 6), rng.randint(1, 2), rng)


def random_legal_prefix(a, rounds: int, rng: random.Random):
    from opacity_games.arena import PlayPrefix

    prefix = PlayPrefix(a.initial)
    for _ in range(rounds):
        v = prefix.last
        act = rng.choice(a.act[a.obs[v]])
        prefix = prefix.extend(act, rng.choice(a.delta[v][act]))
    return prefix


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
