"""Brute-force reference answers for small instances.

Nothing here reuses the compiled arena, the powerset games or the
attractor solver: sets are plain frozensets of position names and the
games are unfolded by memoised recursion up to a depth that is known to
suffice.  Agreement with the main deciders is therefore real evidence.
"""
from __future__ import annotations

import sys
from functools import lru_cache
from itertools import product

from .arena import GameArena
from .errors import GuardExceeded
from .reductions import Atm, DesProblem, Nfa, initial_configuration, successor_configuration

MAX_POSITIONS = 12


def _guard(size: int, what: str, limit: int = MAX_POSITIONS) -> None:
    if size > limit:
        raise GuardExceeded(f"{what} has {size} elements, oracle limit is {limit}")


class _Knowledge:
    """Information-set dynamics of an arena, over frozensets of names."""

    def __init__(self, arena: GameArena):
        _guard(len(arena.positions), "arena")
        self.arena = arena
        self.secrets = frozenset(arena.secrets)
        self.classes = {}
        for v in arena.positions:
            self.classes.setdefault(arena.obs[v], set()).add(v)

    def actions(self, v: str) -> list[str]:
        return list(self.arena.act[self.arena.obs[v]])

    def post(self, infoset: frozenset, a: str) -> set:
        out = set()
        for v in infoset:
            out.update(self.arena.delta[v][a])
        return out

    def rounds(self, infoset: frozenset, a: str) -> list[frozenset]:
        img = self.post(infoset, a)
        return [frozenset(img & cls) for cls in self.classes.values() if img & cls]

    def bad(self, infoset: frozenset) -> bool:
        return infoset <= self.secrets

    def reachable_infosets(self) -> set[frozenset]:
        start = frozenset([self.arena.initial])
        seen = {start}
        stack = [start]
        while stack:
            infoset = stack.pop()
            for a in self.actions(next(iter(infoset))):
                for nxt in self.rounds(infoset, a):
                    if nxt not in seen:
                        seen.add(nxt)
                        stack.append(nxt)
        return seen


def _deep_recursion(depth: int) -> None:
    need = 4 * depth + 1000
    if sys.getrecursionlimit() < need:
        sys.setrecursionlimit(need)


def oracle_violate(arena: GameArena) -> bool:
    k = _Knowledge(arena)
    depth = len(k.reachable_infosets()) * (len(arena.alphabet) + 1) + 1
    _deep_recursion(depth)

    @lru_cache(maxsize=None)
    def forces(infoset: frozenset, d: int) -> bool:
        if k.bad(infoset):
            return True
        if d == 0:
            return False
        return any(
            all(forces(nxt, d - 1) for nxt in k.rounds(infoset, a))
            for a in k.actions(next(iter(infoset)))
        )

    return forces(frozenset([arena.initial]), depth)


def oracle_guarantee(arena: GameArena) -> bool:
    k = _Knowledge(arena)
    start = (frozenset([arena.initial]), arena.initial)

    def step(node):
        infoset, v = node
        for a in k.actions(v):
            img = k.post(infoset, a)
            yield a, [(frozenset(img & k.classes[arena.obs[w]]), w) for w in arena.delta[v][a]]

    nodes = {start}
    stack = [start]
    while stack:
        node = stack.pop()
        for _, options in step(node):
            for nxt in options:
                if nxt not in nodes:
                    nodes.add(nxt)
                    stack.append(nxt)
    depth = len(nodes) + 1
    _deep_recursion(depth)

    @lru_cache(maxsize=None)
    def survives(node, d: int) -> bool:
        if k.bad(node[0]):
            return False
        if d == 0:
            return True
        return all(any(survives(nxt, d - 1) for nxt in options) for _, options in step(node))

    return survives(start, depth)


def oracle_verify(arena: GameArena) -> bool:
    """Enumerate plays position by position, up to a length that suffices.

    A node ``(information set, position)`` is re-expanded only when met
    again with a strictly shorter prefix.
    """
    k = _Knowledge(arena)
    limit = len(k.reachable_infosets()) + 1
    _deep_recursion(limit)
    shortest: dict = {}

    def explore(infoset: frozenset, v: str, length: int) -> bool:
        if k.bad(infoset):
            return False
        if length == limit or shortest.get((infoset, v), limit + 1) <= length:
            return True
        shortest[infoset, v] = length
        for a in k.actions(v):
            img = k.post(infoset, a)
            for w in arena.delta[v][a]:
                if not explore(frozenset(img & k.classes[arena.obs[w]]), w, length + 1):
                    return False
        return True

    return explore(frozenset([arena.initial]), arena.initial, 0)


def nfa_universal_determinize(nfa: Nfa) -> bool:
    _guard(len(nfa.states), "NFA")
    start = frozenset(nfa.initial)
    seen = {start}
    todo = [start]
    while todo:
        current = todo.pop()
        if not current & nfa.accepting:
            return False
        for a in nfa.alphabet:
            nxt = frozenset(t for q in current for t in nfa.step(q, a))
            if nxt not in seen:
                seen.add(nxt)
                todo.append(nxt)
    return True


def nfa_universal_by_words(nfa: Nfa, max_length: int) -> bool:
    """No rejected word of length at most ``max_length`` exists."""
    for n in range(max_length + 1):
        for word in product(nfa.alphabet, repeat=n):
            if not nfa.accepts(word):
                return False
    return True


def _estimate(problem: DesProblem, word: tuple[str, ...]) -> frozenset:
    """Product states reached by the traces whose observable projection is ``word``.

    Explores pairs (product state, letters of ``word`` consumed) directly on
    the system and the secret DFA.
    """
    G, phi, observable = problem.system, problem.secret, set(problem.observable)
    start = ((G.initial, phi.initial), 0)
    seen = {start}
    stack = [start]
    while stack:
        (g, p), i = stack.pop()
        for e in G.alphabet:
            g2 = G.step(g, e)
            if g2 is None:
                continue
            if e in observable:
                if i < len(word) and word[i] == e:
                    nxt = ((g2, phi.step(p, e)), i + 1)
                else:
                    continue
            else:
                nxt = ((g2, phi.step(p, e)), i)
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return frozenset(state for state, i in seen if i == len(word))


def _reachable_pairs(problem: DesProblem) -> int:
    G, phi = problem.system, problem.secret
    seen = {(G.initial, phi.initial)}
    stack = list(seen)
    while stack:
        g, p = stack.pop()
        for e, g2 in G.delta.get(g, {}).items():
            nxt = (g2, phi.step(p, e))
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return len(seen)


def des_opaque_by_enumeration(problem: DesProblem, bound: int | None = None) -> bool:
    """For every observed word, some explanation of it avoids the secret.

    Words are enumerated breadth-first up to length ``bound``; a word whose
    set of explanations was already met is not extended, since its future is
    the same.
    """
    problem.check()
    pairs = _reachable_pairs(problem)
    _guard(pairs, "reachable product")
    if bound is None:
        bound = 2 ** pairs
    secret_states = problem.secret.accepting
    layer = [()]
    met = set()
    for _ in range(bound + 1):
        nxt_layer = []
        for word in layer:
            states = _estimate(problem, word)
            if not states:
                continue  # not realised by any trace
            if all(p in secret_states for _, p in states):
                return False
            if states in met:
                continue
            met.add(states)
            nxt_layer += [word + (y,) for y in problem.observable]
        layer = nxt_layer
        if not layer:
            break
    return True


def atm_accepts(atm: Atm) -> bool:
    """Evaluate the (halting) machine's alternating computation tree on ``ε``."""
    _deep_recursion(10_000)

    @lru_cache(maxsize=None)
    def accepts(config) -> bool:
        kind = atm.kinds[config[0]]
        if kind == "accept":
            return True
        if kind == "reject":
            return False
        left = accepts(successor_configuration(atm, config, "L"))
        right = accepts(successor_configuration(atm, config, "R"))
        return left or right if kind == "exists" else left and right

    return accepts(initial_configuration(atm))
