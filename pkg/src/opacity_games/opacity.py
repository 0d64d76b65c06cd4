"""Deciding opacity-violate / -guarantee / -verify, and finite-state strategies.

Intruder strategies are Mealy machines reading observations; Defender
strategies read the actual position and Intruder's action and answer with
a successor position.  Both checkers let the opponent play with perfect
information, which does not change who wins.
"""
from __future__ import annotations

import enum
import time
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Mapping

from .arena import (
    GameArena,
    InformationSet,
    PlayPrefix,
    dumps_json,
    iter_bits,
    iter_infoset_graph,
    read_json,
)
from .errors import InputError, PreconditionError, StrategyError
from .pi_solver import SolveResult, solve
from .powerset import Player, build_guarantee_game, build_violate_game


class Role(enum.Enum):
    INTRUDER = "intruder"
    DEFENDER = "defender"


@dataclass(frozen=True)
class MealyStrategy:
    """Finite-memory strategy.

    INTRUDER: ``output[m]`` is the action played in memory ``m`` and
    ``update[(m, observation)]`` the memory after observing the next
    observation.  DEFENDER: ``moves[(m, position, action)]`` is the pair
    ``(next memory, successor position)``.
    """

    role: Role
    states: tuple[str, ...]
    initial: str
    output: Mapping[str, str] = field(default_factory=dict)
    update: Mapping[tuple[str, str], str] = field(default_factory=dict)
    moves: Mapping[tuple[str, str, str], tuple[str, str]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "role", Role(self.role))
        object.__setattr__(self, "states", tuple(self.states))

    @property
    def memory_size(self) -> int:
        return len(self.states)

    def to_dict(self) -> dict:
        data = {"role": self.role.value, "states": list(self.states), "initial": self.initial}
        if self.role is Role.INTRUDER:
            data["outputs"] = [[m, a] for m, a in self.output.items()]
            data["transitions"] = [[m, g, m2] for (m, g), m2 in self.update.items()]
        else:
            data["transitions"] = [[m, v, a, m2, w] for (m, v, a), (m2, w) in self.moves.items()]
        return data

    @classmethod
    def from_dict(cls, data: Mapping) -> "MealyStrategy":
        try:
            role = Role(data["role"])
            states, initial = list(data["states"]), data["initial"]
            if role is Role.INTRUDER:
                allowed = {"role", "states", "initial", "outputs", "transitions"}
                output = {m: a for m, a in data["outputs"]}
                update = {(m, g): m2 for m, g, m2 in data["transitions"]}
                moves = {}
            else:
                allowed = {"role", "states", "initial", "transitions"}
                output, update = {}, {}
                moves = {(m, v, a): (m2, w) for m, v, a, m2, w in data["transitions"]}
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed strategy file: {exc!r}") from exc
        unknown = set(data) - allowed
        if unknown:
            raise InputError(f"unknown strategy keys: {sorted(unknown)}")
        if initial not in states:
            raise InputError(f"initial memory state {initial!r} is not declared")
        return cls(role, tuple(states), initial, output, update, moves)


def strategy_to_json(strategy: MealyStrategy) -> str:
    return dumps_json(strategy.to_dict())


def save_strategy(strategy: MealyStrategy, path: str | Path) -> None:
    Path(path).write_text(strategy_to_json(strategy), encoding="utf-8")


def load_strategy(path: str | Path) -> MealyStrategy:
    return MealyStrategy.from_dict(read_json(path))


def memoryless_intruder(arena: GameArena, choose: Mapping[str, str] | Callable[[str], str]) -> MealyStrategy:
    """Intruder strategy that plays a fixed action per current observation."""
    pick = choose if callable(choose) else choose.__getitem__
    states = tuple(arena.observations)
    return MealyStrategy(
        Role.INTRUDER,
        states,
        arena.obs[arena.initial],
        output={g: pick(g) for g in states},
        update={(g, h): h for g in states for h in states},
    )


def memoryless_defender(
    arena: GameArena, choose: Mapping[tuple[str, str], str] | Callable[[str, str], str]
) -> MealyStrategy:
    """Single-state Defender strategy ``(position, action) -> successor``."""
    pick = choose if callable(choose) else (lambda v, a: choose[v, a])
    moves = {}
    for v in arena.positions:
        for a in arena.act[arena.obs[v]]:
            moves["m0", v, a] = ("m0", pick(v, a))
    return MealyStrategy(Role.DEFENDER, ("m0",), "m0", moves=moves)


@dataclass(frozen=True)
class Decision:
    verdict: bool
    witness: MealyStrategy | None = None
    counterexample: PlayPrefix | None = None
    stats: dict = field(default_factory=dict, compare=False)


def decide_opacity_violate(arena: GameArena) -> Decision:
    """Does Intruder have a strategy making every play non-opaque?"""
    started = time.perf_counter()
    game = build_violate_game(arena)
    result = solve(game)
    verdict = result.initial_winner is Player.ONE
    witness = lift_intruder_strategy(arena, result) if verdict else None
    stats = {
        "infosets": sum(1 for n in game.nodes if game.owner[n] is Player.ONE),
        "game_nodes": len(game),
        "game_edges": game.num_edges,
        "seconds": time.perf_counter() - started,
    }
    if witness:
        stats["witness_memory"] = witness.memory_size
    return Decision(verdict, witness=witness, stats=stats)


def decide_opacity_guarantee(arena: GameArena) -> Decision:
    """Does Defender have a strategy keeping every play opaque?"""
    started = time.perf_counter()
    game = build_guarantee_game(arena)
    result = solve(game)
    verdict = result.initial_winner is Player.TWO
    witness = lift_defender_strategy(arena, result) if verdict else None
    infosets = {game.tags[n].infoset for n in game.nodes if game.owner[n] is Player.ONE}
    stats = {
        "infosets": len(infosets),
        "game_nodes": len(game),
        "game_edges": game.num_edges,
        "seconds": time.perf_counter() - started,
    }
    if witness:
        stats["witness_memory"] = witness.memory_size
    return Decision(verdict, witness=witness, stats=stats)


def decide_opacity_verify(arena: GameArena) -> Decision:
    """Is every Defender strategy winning, i.e. is every play opaque?

    Explores reachable information sets breadth-first and stops at the
    first one included in the secrets; the counterexample is then a
    shortest play realising it.
    """
    started = time.perf_counter()
    c = arena.compiled
    parent: dict[int, tuple[int, str] | None] = {1 << c.initial: None}
    bad = None
    explored = 0
    if c.is_bad(1 << c.initial):
        bad = 1 << c.initial
    else:
        for node, out in iter_infoset_graph(arena):
            explored += 1
            for (a, _), nxt in out:
                if nxt.mask not in parent:
                    parent[nxt.mask] = (node.mask, a)
                    if c.is_bad(nxt.mask):
                        bad = nxt.mask
                        break
            if bad is not None:
                break
    stats = {"infosets": len(parent), "expanded": explored, "seconds": time.perf_counter() - started}
    if bad is None:
        return Decision(True, stats=stats)
    masks, actions = [bad], []
    while parent[masks[-1]] is not None:
        prev, a = parent[masks[-1]]
        masks.append(prev)
        actions.append(a)
    masks.reverse()
    actions.reverse()
    return Decision(False, counterexample=_realise(c, masks, actions), stats=stats)


def _realise(c, masks: list[int], actions: list[str]) -> PlayPrefix:
    """A concrete play whose information sets are ``masks``.

    ``actions[k]`` leads from ``masks[k]`` to ``masks[k+1]``; positions are
    chosen backwards, taking the first member in canonical order each time.
    """
    v = next(iter_bits(masks[-1]))
    positions = [v]
    for k in range(len(actions) - 1, -1, -1):
        v = next(u for u in iter_bits(masks[k]) if c.succ[u][actions[k]] >> v & 1)
        positions.append(v)
    positions.reverse()
    names = [c.positions[i] for i in positions]
    return PlayPrefix(names[0], tuple(zip(actions, names[1:])))


def lift_intruder_strategy(arena: GameArena, solution: SolveResult) -> MealyStrategy:
    """Observation-based Mealy strategy from a solved violate game.

    Memory states are the information sets reached when following the
    attractor strategy; outputs are the strategy's actions.
    """
    game = solution.game
    if solution.initial_winner is not Player.ONE:
        raise PreconditionError("Intruder does not win the violate game")
    names: dict[int, str] = {}
    output: dict[str, str] = {}
    update: dict[tuple[str, str], str] = {}

    def name(n: int) -> str:
        if n not in names:
            names[n] = f"m{len(names)}"
            queue.append(n)
        return names[n]

    queue: deque[int] = deque()
    name(game.initial)
    while queue:
        n = queue.popleft()
        m = names[n]
        # outside ONE's region only after a secret set was already reached
        choice = solution.strategy_one.get(n, game.succ[n][0])
        output[m] = game.tags[choice].action
        for g, nxt in zip(game.labels[choice], game.succ[choice]):
            update[m, g] = name(nxt)
    return MealyStrategy(Role.INTRUDER, tuple(names.values()), "m0", output, update)


def lift_defender_strategy(arena: GameArena, solution: SolveResult) -> MealyStrategy:
    """Mealy strategy from a solved guarantee game; memory states are ``(I, v)`` nodes."""
    game = solution.game
    if solution.initial_winner is not Player.TWO:
        raise PreconditionError("Defender does not win the guarantee game")
    names: dict[int, str] = {}
    moves: dict[tuple[str, str, str], tuple[str, str]] = {}
    queue: deque[int] = deque([game.initial])
    names[game.initial] = "m0"
    while queue:
        n = queue.popleft()
        m = names[n]
        v = game.tags[n].position
        for a, choice in zip(game.labels[n], game.succ[n]):
            nxt = solution.strategy_two[choice]
            if nxt not in names:
                names[nxt] = f"m{len(names)}"
                queue.append(nxt)
            moves[m, v, a] = (names[nxt], game.tags[nxt].position)
    return MealyStrategy(Role.DEFENDER, tuple(names.values()), "m0", moves=moves)


def _require_role(strategy: MealyStrategy, role: Role) -> None:
    if strategy.role is not role:
        raise StrategyError(f"expected a {role.value} strategy, got {strategy.role.value}")


def defender_move(arena, c, beta: MealyStrategy, m: str, v: int, a: str) -> tuple[str, int]:
    key = (m, c.positions[v], a)
    if key not in beta.moves:
        raise StrategyError(f"defender strategy undefined at (memory={m}, position={key[1]}, action={a})")
    m2, w = beta.moves[key]
    if m2 not in beta.states:
        raise StrategyError(f"defender strategy moves to undeclared memory {m2!r} at {key}")
    if w not in c.index or not c.succ[v][a] >> c.index[w] & 1:
        raise StrategyError(
            f"defender strategy at (memory={m}, position={key[1]}, action={a}) "
            f"answers {w!r}, which is not a successor"
        )
    return m2, c.index[w]


def intruder_action(arena, c, alpha: MealyStrategy, m: str, mask: int) -> str:
    if m not in alpha.output:
        raise StrategyError(f"intruder strategy has no output in memory {m!r}")
    a = alpha.output[m]
    if a not in c.actions_of_mask(mask):
        g = c.observations[c.obs_of_mask(mask)]
        raise StrategyError(f"intruder strategy plays {a!r} in memory {m!r}, unavailable under {g!r}")
    return a


def intruder_update(alpha: MealyStrategy, m: str, g: str) -> str:
    if (m, g) not in alpha.update:
        raise StrategyError(f"intruder strategy has no transition from {m!r} on observation {g!r}")
    m2 = alpha.update[m, g]
    if m2 not in alpha.states:
        raise StrategyError(f"intruder strategy moves to undeclared memory {m2!r}")
    return m2


def check_defender_strategy(arena: GameArena, beta: MealyStrategy) -> Decision:
    """Is ``beta`` winning against every (even perfectly informed) Intruder?"""
    _require_role(beta, Role.DEFENDER)
    c = arena.compiled
    root = (beta.initial, 1 << c.initial, c.initial)
    parent: dict[tuple, tuple | None] = {root: None}
    bad = root if c.is_bad(root[1]) else None
    queue = deque([root])
    while queue and bad is None:
        node = queue.popleft()
        m, mask, v = node
        for a in c.actions_of_obs[c.obs_of[v]]:
            m2, w = defender_move(arena, c, beta, m, v, a)
            nxt = (m2, c.image(mask, a) & c.class_mask[c.obs_of[w]], w)
            if nxt not in parent:
                parent[nxt] = (node, a)
                if c.is_bad(nxt[1]):
                    bad = nxt
                    break
                queue.append(nxt)
    stats = {"product_nodes": len(parent)}
    if bad is None:
        return Decision(True, stats=stats)
    steps = []
    node = bad
    while parent[node] is not None:
        prev, a = parent[node]
        steps.append((a, c.positions[node[2]]))
        node = prev
    return Decision(False, counterexample=PlayPrefix(arena.initial, tuple(reversed(steps))), stats=stats)


def check_intruder_strategy(arena: GameArena, alpha: MealyStrategy) -> Decision:
    """Does ``alpha`` force a non-opaque play against every Defender?

    Holds iff the product of ``alpha`` with the information-set dynamics has
    no cycle through sets that are not included in the secrets.
    """
    _require_role(alpha, Role.INTRUDER)
    c = arena.compiled
    if alpha.initial not in alpha.states:
        raise StrategyError(f"undeclared initial memory {alpha.initial!r}")

    def successors(node):
        m, mask = node
        a = intruder_action(arena, c, alpha, m, mask)
        img = c.image(mask, a)
        out = []
        for g, cls in enumerate(c.class_mask):
            nxt = img & cls
            if nxt:
                out.append((intruder_update(alpha, m, c.observations[g]), nxt))
        return out

    root = (alpha.initial, 1 << c.initial)
    if c.is_bad(root[1]):
        return Decision(True, stats={"product_nodes": 1})
    # iterative DFS: GREY nodes are on the current path
    GREY, BLACK = 1, 2
    colour = {root: GREY}
    stack = [(root, iter(successors(root)))]
    while stack:
        node, it = stack[-1]
        for nxt in it:
            if c.is_bad(nxt[1]):
                continue
            state = colour.get(nxt)
            if state == GREY:
                return Decision(False, stats={"product_nodes": len(colour)})
            if state is None:
                colour[nxt] = GREY
                stack.append((nxt, iter(successors(nxt))))
                break
        else:
            colour[node] = BLACK
            stack.pop()
    return Decision(True, stats={"product_nodes": len(colour)})


@dataclass(frozen=True)
class Simulation:
    prefix: PlayPrefix
    infosets: tuple[InformationSet, ...]
    bad: tuple[bool, ...]  # bad[k]: information set after k rounds is inside the secrets

    @property
    def opaque(self) -> bool:
        return not any(self.bad)

    @property
    def first_bad_round(self) -> int | None:
        return next((k for k, b in enumerate(self.bad) if b), None)


def simulate_play(arena: GameArena, alpha: MealyStrategy, beta: MealyStrategy, bound: int) -> Simulation:
    """The first ``bound`` rounds of the unique play induced by both strategies."""
    _require_role(alpha, Role.INTRUDER)
    _require_role(beta, Role.DEFENDER)
    c = arena.compiled
    ma, mb, v = alpha.initial, beta.initial, c.initial
    mask = 1 << v
    prefix = PlayPrefix(arena.initial)
    infosets, bad = [c.infoset(mask)], [c.is_bad(mask)]
    for _ in range(bound):
        a = intruder_action(arena, c, alpha, ma, mask)
        mb, v = defender_move(arena, c, beta, mb, v, a)
        mask = c.image(mask, a) & c.class_mask[c.obs_of[v]]
        ma = intruder_update(alpha, ma, c.observations[c.obs_of[v]])
        prefix = prefix.extend(a, c.positions[v])
        infosets.append(c.infoset(mask))
        bad.append(c.is_bad(mask))
    return Simulation(prefix, tuple(infosets), tuple(bad))
