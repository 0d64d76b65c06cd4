"""Seeded random instances (arenas, NFAs, DES problems, ATMs)."""
from __future__ import annotations

import random
import string

from .arena import GameArena, validate_arena
from .errors import InputError
from .reductions import Atm, DesProblem, Dfa, Lts, Nfa, check_atm_halts, des_to_game, synchronized_product


def _rng(seed) -> random.Random:
    return seed if isinstance(seed, random.Random) else random.Random(seed)


def _subset(rng: random.Random, items, max_size: int | None = None) -> list:
    """Random nonempty subset, kept in the order of ``items``."""
    items = list(items)
    k = rng.randint(1, min(len(items), max_size or len(items)))
    chosen = set(rng.sample(items, k))
    return [x for x in items if x in chosen]


def action_names(k: int) -> list[str]:
    return list(string.ascii_lowercase[:k])


def random_arena(
    positions: int,
    actions: int,
    observations: int,
    seed=None,
    secret_ratio: float = 0.4,
    max_branching: int = 3,
) -> GameArena:
    rng = _rng(seed)
    vs = [f"p{i}" for i in range(positions)]
    sigma = action_names(actions)
    raw_obs = {v: rng.randrange(observations) for v in vs}
    used = sorted(set(raw_obs.values()))
    gammas = [f"o{i}" for i in range(len(used))]
    obs = {v: gammas[used.index(raw_obs[v])] for v in vs}
    act = {g: _subset(rng, sigma) for g in gammas}
    delta = {v: {a: _subset(rng, vs, max_branching) for a in act[obs[v]]} for v in vs}
    # a secret initial position decides everything at round 0; keep it rare
    secrets = [v for i, v in enumerate(vs) if rng.random() < (secret_ratio / 4 if i == 0 else secret_ratio)]
    arena = GameArena(vs, sigma, obs, act, delta, vs[0], secrets, observations=gammas)
    assert validate_arena(arena).ok
    return arena


def random_blindfold_arena(positions: int, actions: int, seed=None, secret_ratio: float = 0.4) -> GameArena:
    return random_arena(positions, actions, 1, seed, secret_ratio)


def random_nfa(states: int, letters: int = 2, seed=None, accepting_ratio: float = 0.6) -> Nfa:
    rng = _rng(seed)
    qs = [f"q{i}" for i in range(1, states + 1)]
    sigma = action_names(letters)
    delta = {q: {a: _subset(rng, qs, 2) for a in sigma} for q in qs}
    initial = _subset(rng, qs, 2)
    accepting = [q for q in qs if rng.random() < accepting_ratio]
    return Nfa(qs, sigma, delta, initial, accepting)


def random_des(seed=None, max_product: int = 6, attempts: int = 1000) -> DesProblem:
    """Small DES problem whose observer never deadlocks and whose product is small."""
    rng = _rng(seed)
    for _ in range(attempts):
        n = rng.randint(2, 4)
        events = ["o", "u"] if rng.random() < 0.5 else ["o", "p", "u"]
        gs = [f"g{i}" for i in range(n)]
        delta = {g: {e: rng.choice(gs) for e in events if rng.random() < 0.6} for g in gs}
        system = Lts(gs, events, delta, "g0")
        ps = ["s0", "s1"]
        phi = Dfa(ps, events, {p: {e: rng.choice(ps) for e in events} for p in ps}, "s0", [p for p in ps if rng.random() < 0.5])
        observable = [e for e in events if e != "u"]
        problem = DesProblem(system, phi, observable)
        if len(synchronized_product(problem).states) > max_product:
            continue
        try:
            des_to_game(problem)
        except InputError:
            continue
        return problem
    raise RuntimeError("could not draw a well-formed DES problem")


def random_atm(seed=None, n: int = 2, symbols: int = 2, inner_states: int = 2, attempts: int = 1000) -> Atm:
    """Small halting ATM; ``inner_states`` existential/universal states plus accept/reject."""
    rng = _rng(seed)
    tape = ["_"] + list(string.ascii_lowercase[: symbols - 1])
    for _ in range(attempts):
        inner = [f"q{i}" for i in range(inner_states)]
        kinds = {q: rng.choice(["exists", "forall"]) for q in inner}
        kinds.update({"acc": "accept", "rej": "reject"})
        states = list(kinds)
        delta = {}
        for q in inner:
            for b in tape:
                delta[q, b] = tuple((rng.choice(states), rng.choice(tape), rng.choice((1, -1))) for _ in range(2))
        atm = Atm(tape, "_", kinds, "q0", delta, n)
        try:
            check_atm_halts(atm)
        except InputError:
            continue
        return atm
    raise RuntimeError("could not draw a halting ATM")
