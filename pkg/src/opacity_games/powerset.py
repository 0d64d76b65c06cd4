"""Perfect-information powerset games built from an arena.

``build_violate_game`` tracks Intruder's information set only; Intruder
wins there iff he can force an information set made of secrets.
``build_guarantee_game`` additionally tracks the actual position, which is
what Defender needs to keep Intruder uncertain forever.

Both games are built breadth-first from the initial node, with successors
in canonical order, so node numbering is reproducible.
"""
from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field
from typing import Hashable

from .arena import GameArena, InformationSet, iter_bits


class Player(enum.Enum):
    ONE = "one"
    TWO = "two"

    @property
    def opponent(self) -> "Player":
        return Player.TWO if self is Player.ONE else Player.ONE


class Mode(enum.Enum):
    REACH = "reach"  # the question is whether ONE can force a target
    SAFE = "safe"  # the question is whether TWO can avoid targets forever


@dataclass(frozen=True)
class TildeInfo:
    infoset: InformationSet

    def __str__(self) -> str:
        return str(self.infoset)


@dataclass(frozen=True)
class TildeChoice:
    infoset: InformationSet
    action: str

    def __str__(self) -> str:
        return f"({self.infoset},{self.action})"


@dataclass(frozen=True)
class HatInfo:
    infoset: InformationSet
    position: str

    def __str__(self) -> str:
        return f"({self.infoset},{self.position})"


@dataclass(frozen=True)
class HatChoice:
    infoset: InformationSet
    position: str
    action: str

    def __str__(self) -> str:
        return f"({self.infoset},{self.position},{self.action})"


@dataclass
class PerfectInfoGame:
    """Explicit two-player game graph; nodes are ``0 .. len(game)-1``.

    ``succ[n]`` and ``labels[n]`` hold the out-edges of ``n`` in canonical
    order.  Player ONE tries to visit a target node, player TWO tries to
    avoid targets forever; ``mode`` only records whose question is asked.
    """

    mode: Mode
    owner: list[Player] = field(default_factory=list)
    tags: list[Hashable] = field(default_factory=list)
    target: list[bool] = field(default_factory=list)
    succ: list[list[int]] = field(default_factory=list)
    labels: list[list[str]] = field(default_factory=list)
    initial: int = 0
    index: dict[Hashable, int] = field(default_factory=dict, repr=False)

    def __len__(self) -> int:
        return len(self.owner)

    def add_node(self, tag: Hashable, owner: Player, target: bool = False) -> tuple[int, bool]:
        """Return the node for ``tag``, creating it if needed; the flag is True when new."""
        if tag in self.index:
            return self.index[tag], False
        n = len(self.owner)
        self.index[tag] = n
        self.tags.append(tag)
        self.owner.append(owner)
        self.target.append(target)
        self.succ.append([])
        self.labels.append([])
        return n, True

    def add_edge(self, src: int, dst: int, label: str = "") -> None:
        self.succ[src].append(dst)
        self.labels[src].append(label)

    @property
    def nodes(self) -> range:
        return range(len(self.owner))

    @property
    def targets(self) -> frozenset[int]:
        return frozenset(n for n, t in enumerate(self.target) if t)

    @property
    def num_edges(self) -> int:
        return sum(map(len, self.succ))

    def edges(self):
        for n, (ss, ls) in enumerate(zip(self.succ, self.labels)):
            for s, lab in zip(ss, ls):
                yield n, lab, s

    def node_of(self, tag: Hashable) -> int:
        return self.index[tag]

    def predecessors(self) -> list[list[int]]:
        preds: list[list[int]] = [[] for _ in self.owner]
        for n, ss in enumerate(self.succ):
            for s in dict.fromkeys(ss):
                preds[s].append(n)
        return preds


def build_violate_game(arena: GameArena) -> PerfectInfoGame:
    c = arena.compiled
    game = PerfectInfoGame(Mode.REACH)
    images: dict[tuple[int, str], int] = {}
    start = 1 << c.initial
    game.add_node(TildeInfo(c.infoset(start)), Player.ONE, c.is_bad(start))
    queue = deque([0])
    while queue:
        n = queue.popleft()
        tag = game.tags[n]
        mask = tag.infoset.mask
        if isinstance(tag, TildeInfo):
            for a in c.actions_of_mask(mask):
                m, new = game.add_node(TildeChoice(tag.infoset, a), Player.TWO)
                game.add_edge(n, m, a)
                if new:
                    queue.append(m)
        else:
            key = (mask, tag.action)
            img = images.get(key)
            if img is None:
                img = images[key] = c.image(mask, tag.action)
            for g, cls in enumerate(c.class_mask):
                nxt = img & cls
                if nxt:
                    m, new = game.add_node(TildeInfo(c.infoset(nxt)), Player.ONE, c.is_bad(nxt))
                    game.add_edge(n, m, c.observations[g])
                    if new:
                        queue.append(m)
    return game


def build_guarantee_game(arena: GameArena) -> PerfectInfoGame:
    c = arena.compiled
    game = PerfectInfoGame(Mode.SAFE)
    images: dict[tuple[int, str], int] = {}
    start = 1 << c.initial
    game.add_node(HatInfo(c.infoset(start), arena.initial), Player.ONE, c.is_bad(start))
    queue = deque([0])
    while queue:
        n = queue.popleft()
        tag = game.tags[n]
        mask = tag.infoset.mask
        v = c.index[tag.position]
        if isinstance(tag, HatInfo):
            for a in c.actions_of_obs[c.obs_of[v]]:
                m, new = game.add_node(HatChoice(tag.infoset, tag.position, a), Player.TWO)
                game.add_edge(n, m, a)
                if new:
                    queue.append(m)
        else:
            key = (mask, tag.action)
            img = images.get(key)
            if img is None:
                img = images[key] = c.image(mask, tag.action)
            for w in iter_bits(c.succ[v][tag.action]):
                nxt = img & c.class_mask[c.obs_of[w]]
                m, new = game.add_node(
                    HatInfo(c.infoset(nxt), c.positions[w]), Player.ONE, c.is_bad(nxt)
                )
                game.add_edge(n, m, c.positions[w])
                if new:
                    queue.append(m)
    return game


def to_dot(game: PerfectInfoGame) -> str:
    """Debug rendering: one ``node`` line per node, one ``edge`` line per edge."""
    lines = [f"digraph {game.mode.value} {{"]
    for n in game.nodes:
        shape = "box" if game.owner[n] is Player.ONE else "ellipse"
        style = ", style=bold" if game.target[n] else ""
        label = str(game.tags[n]).replace('"', '\\"')
        initial = " initial" if n == game.initial else ""
        lines.append(
            f'  n{n} [label="{label}", shape={shape}{style}];'
            f" // owner={game.owner[n].value} target={int(game.target[n])}{initial}"
        )
    for src, lab, dst in game.edges():
        lines.append(f'  n{src} -> n{dst} [label="{lab}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
