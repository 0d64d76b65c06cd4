"""Blindfold arenas: Intruder observes nothing but his own actions.

There the information set after ``a1..an`` is simply the image of ``{v0}``
under the word, so the game collapses to a one-player search over subsets.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .arena import GameArena
from .errors import PreconditionError
from .opacity import Role


@dataclass(frozen=True)
class BlindfoldOutcome:
    winner: Role
    word: tuple[str, ...] | None = None  # shortest winning action word when Intruder wins


def is_blindfold(arena: GameArena) -> bool:
    return len(set(arena.obs[v] for v in arena.positions)) == 1


def solve_blindfold(arena: GameArena) -> BlindfoldOutcome:
    if not is_blindfold(arena):
        raise PreconditionError("arena is not blindfold")
    c = arena.compiled
    actions = c.actions_of_obs[c.obs_of[c.initial]]
    start = 1 << c.initial
    if c.is_bad(start):
        return BlindfoldOutcome(Role.INTRUDER, ())
    parent: dict[int, tuple[int, str] | None] = {start: None}
    queue = deque([start])
    while queue:
        mask = queue.popleft()
        for a in actions:
            nxt = c.image(mask, a)
            if nxt in parent:
                continue
            parent[nxt] = (mask, a)
            if c.is_bad(nxt):
                word = []
                node = nxt
                while parent[node] is not None:
                    node, letter = parent[node]
                    word.append(letter)
                return BlindfoldOutcome(Role.INTRUDER, tuple(reversed(word)))
            queue.append(nxt)
    return BlindfoldOutcome(Role.DEFENDER)
