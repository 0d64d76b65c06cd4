"""Arenas of games with opacity condition and Intruder's information sets.

Positions, actions and observations are plain strings.  Internally every
arena is compiled to bitmasks over the declared position order, which is
also the canonical order used for every traversal and every printed set.
"""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import IllegalPrefixError, InputError, UnreachableObservationError

ARENA_KEYS = ("positions", "alphabet", "observations", "actions", "initial", "secrets", "delta")
OPTIONAL_ARENA_KEYS = ("provenance",)


def iter_bits(mask: int) -> Iterator[int]:
    """Indices of the set bits of ``mask``, lowest first."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class Violation:
    code: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def codes(self) -> list[str]:
        return [v.code for v in self.violations]

    def __str__(self) -> str:
        if self.ok:
            return "arena is well-formed"
        return "\n".join(f"{v.code}: {v.message}" for v in self.violations)


@dataclass(frozen=True)
class GameArena:
    """A finite game arena ``(V, delta, obs, act, v0, S)``.

    ``act`` maps observations to available actions and ``delta`` maps a
    position and an action to the tuple of possible successors.  Inputs are
    normalised to tuples/frozensets on construction; call
    :func:`validate_arena` to check well-formedness.
    """

    positions: tuple[str, ...]
    alphabet: tuple[str, ...]
    obs: Mapping[str, str]
    act: Mapping[str, tuple[str, ...]]
    delta: Mapping[str, Mapping[str, tuple[str, ...]]]
    initial: str
    secrets: frozenset[str]
    observations: tuple[str, ...] = ()
    provenance: Mapping[str, object] | None = field(default=None, compare=False, repr=False)

    def __post_init__(self) -> None:
        set_ = object.__setattr__
        set_(self, "positions", tuple(self.positions))
        set_(self, "alphabet", tuple(self.alphabet))
        set_(self, "obs", dict(self.obs))
        set_(self, "act", {g: tuple(acts) for g, acts in self.act.items()})
        set_(self, "delta", {v: {a: tuple(ts) for a, ts in row.items()} for v, row in self.delta.items()})
        set_(self, "secrets", frozenset(self.secrets))
        observations = list(self.observations) or list(self.act)
        for g in self.obs.values():
            if g not in observations:
                observations.append(g)
        set_(self, "observations", tuple(observations))
        if self.provenance is not None:
            set_(self, "provenance", dict(self.provenance))

    @cached_property
    def compiled(self) -> "CompiledArena":
        report = validate_arena(self)
        if not report.ok:
            raise InputError(f"invalid arena:\n{report}")
        return CompiledArena(self)

    def infoset(self, members: Iterable[str]) -> "InformationSet":
        c = self.compiled
        mask = 0
        for v in members:
            if v not in c.index:
                raise InputError(f"unknown position {v!r}")
            mask |= 1 << c.index[v]
        if not mask:
            raise InputError("information sets are nonempty")
        return InformationSet(mask, self.positions)

    def successors(self, v: str, a: str) -> tuple[str, ...]:
        return self.delta.get(v, {}).get(a, ())

    def to_dict(self) -> dict:
        order = {v: i for i, v in enumerate(self.positions)}
        data = {
            "positions": list(self.positions),
            "alphabet": list(self.alphabet),
            "observations": {v: self.obs[v] for v in self.positions if v in self.obs},
            "actions": {g: list(self.act[g]) for g in self.act},
            "initial": self.initial,
            "secrets": sorted(self.secrets, key=lambda v: order.get(v, len(order))),
            "delta": {v: {a: list(ts) for a, ts in row.items()} for v, row in self.delta.items()},
        }
        if self.provenance:
            data["provenance"] = dict(self.provenance)
        return data

    @classmethod
    def from_dict(cls, data: Mapping) -> "GameArena":
        if not isinstance(data, Mapping):
            raise InputError("arena file must contain a JSON object")
        unknown = set(data) - set(ARENA_KEYS) - set(OPTIONAL_ARENA_KEYS)
        if unknown:
            raise InputError(f"unknown arena keys: {sorted(unknown)}")
        missing = [k for k in ARENA_KEYS if k not in data]
        if missing:
            raise InputError(f"missing arena keys: {missing}")
        _expect(data["positions"], list, "positions")
        _expect(data["alphabet"], list, "alphabet")
        _expect(data["observations"], dict, "observations")
        _expect(data["actions"], dict, "actions")
        _expect(data["initial"], str, "initial")
        _expect(data["secrets"], list, "secrets")
        _expect(data["delta"], dict, "delta")
        for v, row in data["delta"].items():
            _expect(row, dict, f"delta[{v!r}]")
            for a, ts in row.items():
                _expect(ts, list, f"delta[{v!r}][{a!r}]")
        return cls(
            positions=data["positions"],
            alphabet=data["alphabet"],
            obs=data["observations"],
            act=data["actions"],
            delta=data["delta"],
            initial=data["initial"],
            secrets=data["secrets"],
            observations=tuple(data["actions"]),
            provenance=data.get("provenance"),
        )


def _expect(value, kind, what: str) -> None:
    if not isinstance(value, kind):
        raise InputError(f"{what}: expected {kind.__name__}, got {type(value).__name__}")


def dumps_json(data) -> str:
    """Canonical text form used by every file format of the package."""
    return json.dumps(data, indent=2, ensure_ascii=False) + "\n"


def read_json(path: str | Path):
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc})") from exc
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from exc


def load_arena(path: str | Path) -> GameArena:
    return GameArena.from_dict(read_json(path))


def arena_to_json(arena: GameArena) -> str:
    return dumps_json(arena.to_dict())


def save_arena(arena: GameArena, path: str | Path) -> None:
    Path(path).write_text(arena_to_json(arena), encoding="utf-8")


class CompiledArena:
    """Bitmask view of a valid arena; bit ``i`` stands for ``positions[i]``."""

    def __init__(self, arena: GameArena):
        self.arena = arena
        self.positions = arena.positions
        self.index = {v: i for i, v in enumerate(arena.positions)}
        self.observations = arena.observations
        self.obs_index = {g: i for i, g in enumerate(arena.observations)}
        alpha_order = {a: i for i, a in enumerate(arena.alphabet)}
        self.obs_of = [self.obs_index[arena.obs[v]] for v in arena.positions]
        self.class_mask = [0] * len(self.observations)
        for i, g in enumerate(self.obs_of):
            self.class_mask[g] |= 1 << i
        self.actions_of_obs = [
            tuple(sorted(set(arena.act[g]), key=alpha_order.__getitem__)) for g in self.observations
        ]
        self.succ: list[dict[str, int]] = []
        for v in arena.positions:
            row = {}
            for a in self.actions_of_obs[self.obs_of[self.index[v]]]:
                m = 0
                for t in arena.delta[v][a]:
                    m |= 1 << self.index[t]
                row[a] = m
            self.succ.append(row)
        self.initial = self.index[arena.initial]
        self.secret_mask = 0
        for v in arena.secrets:
            self.secret_mask |= 1 << self.index[v]
        self.full_mask = (1 << len(self.positions)) - 1

    def image(self, mask: int, a: str) -> int:
        out = 0
        succ = self.succ
        for i in iter_bits(mask):
            out |= succ[i][a]
        return out

    def obs_of_mask(self, mask: int) -> int:
        return self.obs_of[(mask & -mask).bit_length() - 1]

    def actions_of_mask(self, mask: int) -> tuple[str, ...]:
        return self.actions_of_obs[self.obs_of_mask(mask)]

    def is_bad(self, mask: int) -> bool:
        return mask & ~self.secret_mask == 0

    def names(self, mask: int) -> tuple[str, ...]:
        return tuple(self.positions[i] for i in iter_bits(mask))

    def infoset(self, mask: int) -> "InformationSet":
        return InformationSet(mask, self.positions)


@dataclass(frozen=True)
class InformationSet:
    """A nonempty set of positions, encoded as a membership bitmask.

    Equality and hashing only look at the mask, so two information sets of
    the same arena are equal exactly when they have the same members.
    """

    mask: int
    universe: tuple[str, ...] = field(compare=False, repr=False)

    @property
    def members(self) -> tuple[str, ...]:
        return tuple(self.universe[i] for i in iter_bits(self.mask))

    def __iter__(self):
        return iter(self.members)

    def __len__(self) -> int:
        return bin(self.mask).count("1")

    def __contains__(self, v: str) -> bool:
        try:
            return bool(self.mask >> self.universe.index(v) & 1)
        except ValueError:
            return False

    def issubset(self, other: Iterable[str]) -> bool:
        return set(self.members) <= set(other)

    def __str__(self) -> str:
        return "{" + ",".join(self.members) + "}"


@dataclass(frozen=True)
class PlayPrefix:
    """A finite play ``v0 a1 v1 ... ak vk``."""

    start: str
    steps: tuple[tuple[str, str], ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "steps", tuple((a, v) for a, v in self.steps))

    def __len__(self) -> int:
        return len(self.steps)

    @property
    def last(self) -> str:
        return self.steps[-1][1] if self.steps else self.start

    @property
    def actions(self) -> tuple[str, ...]:
        return tuple(a for a, _ in self.steps)

    @property
    def positions(self) -> tuple[str, ...]:
        return (self.start,) + tuple(v for _, v in self.steps)

    def prefix(self, k: int) -> "PlayPrefix":
        return PlayPrefix(self.start, self.steps[:k])

    def extend(self, a: str, v: str) -> "PlayPrefix":
        return PlayPrefix(self.start, self.steps + ((a, v),))

    def tokens(self) -> list[str]:
        out = [self.start]
        for a, v in self.steps:
            out += [a, v]
        return out

    def __str__(self) -> str:
        return " ".join(self.tokens())

    @classmethod
    def parse(cls, text: str | Sequence[str]) -> "PlayPrefix":
        tokens = text.split() if isinstance(text, str) else list(text)
        if not tokens or len(tokens) % 2 == 0:
            raise InputError(f"a play prefix has the form 'v0 a1 v1 ... ak vk', got {tokens!r}")
        return cls(tokens[0], tuple(zip(tokens[1::2], tokens[2::2])))


def validate_arena(arena: GameArena) -> ValidationReport:
    out: list[Violation] = []

    def bad(code: str, message: str) -> None:
        out.append(Violation(code, message))

    positions = set(arena.positions)
    alphabet = set(arena.alphabet)
    if len(positions) != len(arena.positions):
        bad("duplicate-position", "positions are declared more than once")
    if len(alphabet) != len(arena.alphabet):
        bad("duplicate-action", "actions are declared more than once")
    if not arena.positions:
        bad("no-positions", "the arena has no position")
    if arena.initial not in positions:
        bad("initial-not-position", f"initial position {arena.initial!r} is not declared")
    for v in sorted(arena.secrets - positions):
        bad("secret-not-position", f"secret {v!r} is not a declared position")
    for v in arena.obs:
        if v not in positions:
            bad("unknown-position", f"observation given for undeclared position {v!r}")
    for v in arena.positions:
        if v not in arena.obs:
            bad("missing-observation", f"position {v!r} has no observation")
    for g in arena.observations:
        if g not in arena.act:
            bad("missing-action-set", f"observation {g!r} has no action set")
            continue
        if not arena.act[g]:
            bad("empty-action-set", f"observation {g!r} has no available action")
        for a in arena.act[g]:
            if a not in alphabet:
                bad("unknown-action", f"action {a!r} of observation {g!r} is not in the alphabet")
    for v, row in arena.delta.items():
        if v not in positions:
            bad("unknown-position", f"transitions given for undeclared position {v!r}")
            continue
        available = set(arena.act.get(arena.obs.get(v), ()))
        for a, targets in row.items():
            if a not in alphabet:
                bad("unknown-action", f"transition of {v!r} uses undeclared action {a!r}")
            elif a not in available:
                bad("unused-transition", f"action {a!r} is not available at {v!r}")
            for t in targets:
                if t not in positions:
                    bad("unknown-position", f"transition {v!r} --{a}--> {t!r} leads outside the arena")
    for v in arena.positions:
        g = arena.obs.get(v)
        for a in arena.act.get(g, ()):
            if a not in alphabet:
                continue
            row = arena.delta.get(v, {})
            if a not in row:
                bad("missing-transition", f"no transition for available action {a!r} at {v!r}")
            elif not row[a]:
                bad("empty-successor-set", f"delta({v!r}, {a!r}) is empty")
    return ValidationReport(tuple(out))


def available_actions(arena: GameArena, v: str) -> tuple[str, ...]:
    c = arena.compiled
    if v not in c.index:
        raise InputError(f"unknown position {v!r}")
    return c.actions_of_obs[c.obs_of[c.index[v]]]


def initial_infoset(arena: GameArena) -> InformationSet:
    c = arena.compiled
    return c.infoset(1 << c.initial)


def update_infoset(arena: GameArena, infoset: InformationSet, a: str, observation: str) -> InformationSet:
    """Knowledge update after Intruder plays ``a`` and then observes ``observation``."""
    c = arena.compiled
    if a not in c.actions_of_mask(infoset.mask):
        raise IllegalPrefixError(f"action {a!r} is not available at {infoset}")
    if observation not in c.obs_index:
        raise InputError(f"unknown observation {observation!r}")
    mask = c.image(infoset.mask, a) & c.class_mask[c.obs_index[observation]]
    if not mask:
        raise UnreachableObservationError(
            f"observation {observation!r} cannot follow action {a!r} from {infoset}"
        )
    return c.infoset(mask)


def check_prefix(arena: GameArena, prefix: PlayPrefix) -> None:
    c = arena.compiled
    if prefix.start != arena.initial:
        raise IllegalPrefixError(f"play must start in {arena.initial!r}, not {prefix.start!r}")
    v = prefix.start
    for k, (a, w) in enumerate(prefix.steps, 1):
        if w not in c.index:
            raise IllegalPrefixError(f"round {k}: unknown position {w!r}")
        if a not in c.actions_of_obs[c.obs_of[c.index[v]]]:
            raise IllegalPrefixError(f"round {k}: action {a!r} is not available at {v!r}")
        if not c.succ[c.index[v]][a] >> c.index[w] & 1:
            raise IllegalPrefixError(f"round {k}: {w!r} is not a successor of {v!r} by {a!r}")
        v = w


def infoset_trace(arena: GameArena, prefix: PlayPrefix) -> list[InformationSet]:
    """Information sets of all prefixes ``rho^0 .. rho^k`` of a legal play prefix."""
    check_prefix(arena, prefix)
    c = arena.compiled
    mask = 1 << c.initial
    trace = [c.infoset(mask)]
    for a, w in prefix.steps:
        mask = c.image(mask, a) & c.class_mask[c.obs_of[c.index[w]]]
        trace.append(c.infoset(mask))
    return trace


def infoset_of_prefix(arena: GameArena, prefix: PlayPrefix) -> InformationSet:
    return infoset_trace(arena, prefix)[-1]


def is_opaque_prefix(arena: GameArena, prefix: PlayPrefix) -> bool:
    c = arena.compiled
    return not any(c.is_bad(i.mask) for i in infoset_trace(arena, prefix))


def observe(arena: GameArena, prefix: PlayPrefix) -> tuple[str, tuple[tuple[str, str], ...]]:
    """What Intruder sees of a play prefix: ``v0`` then (action, observation) pairs."""
    return prefix.start, tuple((a, arena.obs[w]) for a, w in prefix.steps)


@dataclass
class InfosetGraph:
    """Reachable information sets, in breadth-first discovery order."""

    nodes: list[InformationSet]
    edges: dict[InformationSet, list[tuple[tuple[str, str], InformationSet]]]

    def __len__(self) -> int:
        return len(self.nodes)


def iter_infoset_graph(arena: GameArena):
    """Stream ``(infoset, out_edges)`` pairs breadth-first from ``{v0}``.

    Out-edges are ``((action, observation), successor)`` in canonical
    action-then-observation order.  Only reachable sets are ever built.
    """
    c = arena.compiled
    start = 1 << c.initial
    seen = {start}
    queue = deque([start])
    while queue:
        mask = queue.popleft()
        out = []
        for a in c.actions_of_mask(mask):
            img = c.image(mask, a)
            for g, cls in enumerate(c.class_mask):
                nxt = img & cls
                if nxt:
                    out.append(((a, c.observations[g]), c.infoset(nxt)))
                    if nxt not in seen:
                        seen.add(nxt)
                        queue.append(nxt)
        yield c.infoset(mask), out


def reachable_infoset_graph(arena: GameArena) -> InfosetGraph:
    nodes, edges = [], {}
    for node, out in iter_infoset_graph(arena):
        nodes.append(node)
        edges[node] = out
    return InfosetGraph(nodes, edges)
