"""Attractor-based solving of perfect-information reachability/safety games."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .powerset import Mode, PerfectInfoGame, Player

_UNRANKED = float("inf")


def attractor(game: PerfectInfoGame, target: Iterable[int], player: Player) -> dict[int, int]:
    """Nodes from which ``player`` can force a visit to ``target``, with their rank.

    The rank of a node is the iteration of the classical fixpoint at which it
    joins; target nodes have rank 0.  Runs in O(nodes + edges) using
    per-node counters of successors not yet attracted.
    """
    rank = {n: 0 for n in target}
    if not rank:
        return rank
    preds = game.predecessors()
    remaining = [len(set(ss)) for ss in game.succ]
    frontier = list(rank)
    r = 0
    while frontier:
        r += 1
        nxt = []
        for n in frontier:
            for p in preds[n]:
                if p in rank:
                    continue
                if game.owner[p] is player:
                    rank[p] = r
                    nxt.append(p)
                else:
                    remaining[p] -= 1
                    if remaining[p] == 0:
                        rank[p] = r
                        nxt.append(p)
        frontier = nxt
    return rank


@dataclass(frozen=True)
class SolveResult:
    game: PerfectInfoGame
    rank: dict[int, int]  # attractor of the targets for ONE
    strategy_one: dict[int, int]  # ONE-owned node of ONE's region -> successor
    strategy_two: dict[int, int]  # TWO-owned node of TWO's region -> successor

    def winner(self, node: int) -> Player:
        return Player.ONE if node in self.rank else Player.TWO

    def region(self, player: Player) -> frozenset[int]:
        return frozenset(n for n in self.game.nodes if self.winner(n) is player)

    def strategy(self, player: Player) -> dict[int, int]:
        return self.strategy_one if player is Player.ONE else self.strategy_two

    @property
    def initial_winner(self) -> Player:
        return self.winner(self.game.initial)

    @property
    def protagonist_wins(self) -> bool:
        """Answer to the game's question (REACH: does ONE win, SAFE: does TWO win)."""
        protagonist = Player.ONE if self.game.mode is Mode.REACH else Player.TWO
        return self.initial_winner is protagonist


def solve(game: PerfectInfoGame) -> SolveResult:
    rank = attractor(game, game.targets, Player.ONE)
    strategy_one, strategy_two = {}, {}
    for n in game.nodes:
        succ = game.succ[n]
        if not succ:
            continue
        if game.owner[n] is Player.ONE and n in rank:
            if game.target[n]:
                strategy_one[n] = succ[0]
            else:
                strategy_one[n] = next(s for s in succ if rank.get(s, _UNRANKED) < rank[n])
        elif game.owner[n] is Player.TWO and n not in rank:
            strategy_two[n] = next(s for s in succ if s not in rank)
    return SolveResult(game, rank, strategy_one, strategy_two)

