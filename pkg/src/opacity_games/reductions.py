"""Building games with opacity condition from other decision problems.

* imperfect-information reachability games  -> opacity-violate
* NFA universality                          -> opacity-verify (blindfold)
* linearly bounded alternating TMs on ``ε`` -> opacity-guarantee
* language opacity of discrete-event systems -> opacity-verify

Every built arena carries ``provenance``: for each position, what it stands
for in the source problem.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterable, Mapping

from .arena import GameArena, read_json
from .errors import InputError

# ---------------------------------------------------------------------------
# automata

def _check_keys(data: Mapping, required: Iterable[str], what: str, optional: Iterable[str] = ()) -> None:
    if not isinstance(data, Mapping):
        raise InputError(f"{what} must be a JSON object")
    required = tuple(required)
    missing = [k for k in required if k not in data]
    if missing:
        raise InputError(f"{what}: missing keys {missing}")
    unknown = set(data) - set(required) - set(optional)
    if unknown:
        raise InputError(f"{what}: unknown keys {sorted(unknown)}")


@dataclass(frozen=True)
class Nfa:
    states: tuple[str, ...]
    alphabet: tuple[str, ...]
    delta: Mapping[str, Mapping[str, tuple[str, ...]]]
    initial: tuple[str, ...]
    accepting: frozenset[str]

    def __post_init__(self) -> None:
        set_ = object.__setattr__
        set_(self, "states", tuple(self.states))
        set_(self, "alphabet", tuple(self.alphabet))
        set_(self, "delta", {q: {a: tuple(ts) for a, ts in row.items()} for q, row in self.delta.items()})
        set_(self, "initial", tuple(self.initial))
        set_(self, "accepting", frozenset(self.accepting))

    def step(self, q: str, a: str) -> tuple[str, ...]:
        return self.delta.get(q, {}).get(a, ())

    def image(self, qs: Iterable[str], word: Iterable[str]) -> frozenset[str]:
        current = frozenset(qs)
        for a in word:
            current = frozenset(t for q in current for t in self.step(q, a))
        return current

    def accepts(self, word: Iterable[str]) -> bool:
        return bool(self.image(self.initial, word) & self.accepting)

    @property
    def complete(self) -> bool:
        return all(self.step(q, a) for q in self.states for a in self.alphabet)

    def check(self) -> None:
        known = set(self.states)
        letters = set(self.alphabet)
        for q in self.initial + tuple(self.accepting):
            if q not in known:
                raise InputError(f"NFA: unknown state {q!r}")
        for q, row in self.delta.items():
            if q not in known:
                raise InputError(f"NFA: transitions from unknown state {q!r}")
            for a, ts in row.items():
                if a not in letters:
                    raise InputError(f"NFA: unknown letter {a!r}")
                for t in ts:
                    if t not in known:
                        raise InputError(f"NFA: transition to unknown state {t!r}")

    def to_dict(self) -> dict:
        order = {q: i for i, q in enumerate(self.states)}
        return {
            "states": list(self.states),
            "alphabet": list(self.alphabet),
            "initial": list(self.initial),
            "accepting": sorted(self.accepting, key=order.__getitem__),
            "delta": {q: {a: list(ts) for a, ts in row.items()} for q, row in self.delta.items()},
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "Nfa":
        _check_keys(data, ("states", "alphabet", "initial", "accepting", "delta"), "NFA")
        if not isinstance(data["initial"], list):
            raise InputError("NFA: 'initial' must be an array of states")
        nfa = cls(data["states"], data["alphabet"], data["delta"], data["initial"], data["accepting"])
        nfa.check()
        return nfa


@dataclass(frozen=True)
class Lts:
    """Deterministic labelled transition system with a partial transition map."""

    states: tuple[str, ...]
    alphabet: tuple[str, ...]
    delta: Mapping[str, Mapping[str, str]]
    initial: str

    def __post_init__(self) -> None:
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        object.__setattr__(self, "delta", {q: dict(row) for q, row in self.delta.items()})

    def step(self, q: str, a: str) -> str | None:
        return self.delta.get(q, {}).get(a)

    def run(self, word: Iterable[str]) -> str | None:
        q = self.initial
        for a in word:
            q = self.step(q, a)
            if q is None:
                return None
        return q

    @property
    def complete(self) -> bool:
        return all(self.step(q, a) is not None for q in self.states for a in self.alphabet)

    def check(self) -> None:
        known = set(self.states)
        if self.initial not in known:
            raise InputError(f"unknown initial state {self.initial!r}")
        for q, row in self.delta.items():
            if q not in known:
                raise InputError(f"transitions from unknown state {q!r}")
            for a, t in row.items():
                if a not in self.alphabet:
                    raise InputError(f"unknown event {a!r}")
                if t not in known:
                    raise InputError(f"transition to unknown state {t!r}")

    def to_dict(self) -> dict:
        return {
            "states": list(self.states),
            "alphabet": list(self.alphabet),
            "initial": self.initial,
            "delta": {q: {a: [t] for a, t in row.items()} for q, row in self.delta.items()},
        }

    @staticmethod
    def _parse_delta(raw: Mapping) -> dict:
        delta = {}
        if not isinstance(raw, Mapping):
            raise InputError("'delta' must be an object")
        for q, row in raw.items():
            delta[q] = {}
            for a, ts in row.items():
                if not isinstance(ts, list) or len(ts) > 1:
                    raise InputError(f"deterministic transition ({q!r}, {a!r}) needs at most one target")
                if ts:
                    delta[q][a] = ts[0]
        return delta

    @classmethod
    def from_dict(cls, data: Mapping) -> "Lts":
        _check_keys(data, ("states", "alphabet", "initial", "delta"), "LTS")
        lts = cls(data["states"], data["alphabet"], cls._parse_delta(data["delta"]), data["initial"])
        lts.check()
        return lts


@dataclass(frozen=True)
class Dfa(Lts):
    accepting: frozenset[str] = frozenset()

    def __post_init__(self) -> None:
        super().__post_init__()
        object.__setattr__(self, "accepting", frozenset(self.accepting))

    def accepts(self, word: Iterable[str]) -> bool:
        q = self.run(word)
        return q is not None and q in self.accepting

    def to_dict(self) -> dict:
        data = super().to_dict()
        order = {q: i for i, q in enumerate(self.states)}
        data["accepting"] = sorted(self.accepting, key=order.__getitem__)
        return data

    @classmethod
    def from_dict(cls, data: Mapping) -> "Dfa":
        _check_keys(data, ("states", "alphabet", "initial", "accepting", "delta"), "DFA")
        dfa = cls(
            data["states"], data["alphabet"], cls._parse_delta(data["delta"]), data["initial"], data["accepting"]
        )
        dfa.check()
        if not dfa.accepting <= set(dfa.states):
            raise InputError("DFA: accepting states must be declared")
        return dfa


def load_nfa(path: str | Path) -> Nfa:
    return Nfa.from_dict(read_json(path))


# ---------------------------------------------------------------------------
# reachability games with imperfect information

@dataclass(frozen=True)
class ReachGame:
    """An arena (its secrets are ignored) and target observations for Intruder."""

    arena: GameArena
    targets: frozenset[str]

    def __post_init__(self) -> None:
        object.__setattr__(self, "targets", frozenset(self.targets))

    @classmethod
    def from_dict(cls, data: Mapping) -> "ReachGame":
        if not isinstance(data, Mapping) or "targets" not in data:
            raise InputError("reachability game: missing key 'targets'")
        body = {k: v for k, v in data.items() if k != "targets"}
        body.setdefault("secrets", [])
        return cls(GameArena.from_dict(body), frozenset(data["targets"]))


def reach_to_opacity(rg: ReachGame) -> GameArena:
    unknown = rg.targets - set(rg.arena.observations)
    if unknown:
        raise InputError(f"unknown target observations {sorted(unknown)}")
    arena = rg.arena
    secrets = frozenset(v for v in arena.positions if arena.obs[v] in rg.targets)
    return replace(arena, secrets=secrets)


# ---------------------------------------------------------------------------
# NFA universality

def _fresh(name: str, taken: Iterable[str]) -> str:
    taken = set(taken)
    while name in taken:
        name += "'"
    return name


def nfa_to_blindfold_game(nfa: Nfa) -> GameArena:
    """Blindfold game where every Defender strategy wins iff ``nfa`` is universal."""
    nfa.check()
    if not nfa.complete:
        raise InputError("NFA must be complete (every state has a successor on every letter)")
    if not nfa.initial:
        raise InputError("NFA must have an initial state")
    start = _fresh("q0", nfa.states)
    blind = "blind"
    delta = {start: {a: nfa.initial for a in nfa.alphabet}}
    for q in nfa.states:
        delta[q] = {a: nfa.step(q, a) for a in nfa.alphabet}
    provenance = {start: "initialiser"}
    provenance.update({q: f"state {q}" for q in nfa.states})
    return GameArena(
        positions=(start,) + nfa.states,
        alphabet=nfa.alphabet,
        obs={v: blind for v in (start,) + nfa.states},
        act={blind: nfa.alphabet},
        delta=delta,
        initial=start,
        secrets=frozenset(q for q in nfa.states if q not in nfa.accepting),
        provenance=provenance,
    )


# ---------------------------------------------------------------------------
# alternating Turing machines

KINDS = ("exists", "forall", "accept", "reject")
FORALL_L, FORALL_R, EXISTS = "forall_L", "forall_R", "exists"
SAFE_L, SAFE_R, SAFE_CHOICE = "safe_L", "safe_R", "safe_choice"
PHASES = ("L", "R", "choice")

Move = tuple[str, str, int]


@dataclass(frozen=True)
class Atm:
    """Linearly bounded alternating TM with binary branching, run on ``ε``.

    ``delta[(q, b)] = (left_move, right_move)`` with moves
    ``(state, written symbol, direction ±1)``; ``n`` is the tape length.
    """

    tape_alphabet: tuple[str, ...]
    blank: str
    kinds: Mapping[str, str]
    initial: str
    delta: Mapping[tuple[str, str], tuple[Move, Move]]
    n: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "tape_alphabet", tuple(self.tape_alphabet))
        object.__setattr__(self, "kinds", dict(self.kinds))
        object.__setattr__(
            self, "delta", {k: (tuple(l), tuple(r)) for k, (l, r) in self.delta.items()}
        )

    @property
    def states(self) -> tuple[str, ...]:
        return tuple(self.kinds)

    def of_kind(self, kind: str) -> tuple[str, ...]:
        return tuple(q for q, k in self.kinds.items() if k == kind)

    @property
    def accept_state(self) -> str:
        return self.of_kind("accept")[0]

    @property
    def reject_state(self) -> str:
        return self.of_kind("reject")[0]

    def is_terminal(self, q: str) -> bool:
        return self.kinds[q] in ("accept", "reject")

    def check(self) -> None:
        if not isinstance(self.n, int) or self.n <= 1:
            raise InputError(f"ATM tape bound must be an integer > 1, got {self.n!r}")
        if self.blank not in self.tape_alphabet:
            raise InputError("ATM blank symbol must belong to the tape alphabet")
        if len(set(self.tape_alphabet)) != len(self.tape_alphabet):
            raise InputError("ATM tape alphabet has duplicates")
        for a in (FORALL_L, FORALL_R, EXISTS):
            if a in self.tape_alphabet:
                raise InputError(f"tape symbol {a!r} clashes with a choice action name")
        for q, k in self.kinds.items():
            if k not in KINDS:
                raise InputError(f"state {q!r}: kind must be one of {KINDS}, got {k!r}")
        if len(self.of_kind("accept")) != 1 or len(self.of_kind("reject")) != 1:
            raise InputError("ATM needs exactly one accepting and one rejecting state")
        if self.initial not in self.kinds:
            raise InputError(f"unknown initial state {self.initial!r}")
        for (q, b), moves in self.delta.items():
            if q not in self.kinds or b not in self.tape_alphabet:
                raise InputError(f"transition on unknown pair ({q!r}, {b!r})")
            if self.is_terminal(q):
                raise InputError(f"terminal state {q!r} must not have transitions")
            for q2, b2, d in moves:
                if q2 not in self.kinds or b2 not in self.tape_alphabet or d not in (1, -1):
                    raise InputError(f"malformed move {(q2, b2, d)!r} from ({q!r}, {b!r})")
        for q in self.kinds:
            if not self.is_terminal(q):
                for b in self.tape_alphabet:
                    if (q, b) not in self.delta:
                        raise InputError(f"missing transition for ({q!r}, {b!r})")

    def to_dict(self) -> dict:
        rows: dict[str, dict] = {}
        for (q, b), moves in self.delta.items():
            rows.setdefault(q, {})[b] = [list(m) for m in moves]
        return {
            "tape_alphabet": list(self.tape_alphabet),
            "blank": self.blank,
            "states": dict(self.kinds),
            "initial": self.initial,
            "delta": rows,
            "n": self.n,
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "Atm":
        _check_keys(data, ("tape_alphabet", "blank", "states", "initial", "delta", "n"), "ATM")
        delta = {}
        try:
            for q, row in data["delta"].items():
                for b, moves in row.items():
                    left, right = moves
                    delta[q, b] = (tuple(left), tuple(right))
        except (AttributeError, TypeError, ValueError) as exc:
            raise InputError(f"ATM: malformed delta ({exc})") from exc
        atm = cls(data["tape_alphabet"], data["blank"], data["states"], data["initial"], delta, data["n"])
        atm.check()
        return atm


# configuration = (state, head in 1..n, tape)
Configuration = tuple[str, int, tuple[str, ...]]


def initial_configuration(atm: Atm) -> Configuration:
    return atm.initial, 1, (atm.blank,) * atm.n


def successor_configuration(atm: Atm, config: Configuration, side: str) -> Configuration:
    q, i, tape = config
    q2, b2, d = atm.delta[q, tape[i - 1]][0 if side == "L" else 1]
    tape = tape[: i - 1] + (b2,) + tape[i:]
    return q2, i + d, tape


def check_atm_halts(atm: Atm) -> int:
    """Check that every branch from the initial configuration halts on the tape.

    Returns the number of reachable configurations; raises ``InputError`` if
    some branch loops or moves the head off the ``n`` cells.
    """
    atm.check()
    GREY, BLACK = 1, 2
    colour: dict[Configuration, int] = {}
    root = initial_configuration(atm)

    def children(c):
        if atm.is_terminal(c[0]):
            return iter(())
        return iter([successor_configuration(atm, c, "L"), successor_configuration(atm, c, "R")])

    colour[root] = GREY
    stack = [(root, children(root))]
    while stack:
        node, it = stack[-1]
        for nxt in it:
            if not 1 <= nxt[1] <= atm.n:
                raise InputError(f"ATM head leaves the tape from configuration {node}")
            state = colour.get(nxt)
            if state == GREY:
                raise InputError(f"ATM does not halt: configuration {nxt} repeats on a branch")
            if state is None:
                colour[nxt] = GREY
                stack.append((nxt, children(nxt)))
                break
        else:
            colour[node] = BLACK
            stack.pop()
    return len(colour)


def atm_position(h: int, b: str, i: int, q: str, scanned: str, phase: str) -> str:
    return f"{h}:{b}|{i}:{q}:{scanned}|{phase}"


def atm_code(atm: Atm, config: Configuration, phase: str) -> frozenset[str]:
    """Positions of the information set encoding ``config`` in the given phase."""
    q, i, tape = config
    return frozenset(atm_position(h, tape[h - 1], i, q, tape[i - 1], phase) for h in range(1, atm.n + 1))


def atm_to_game(atm: Atm, check_halting: bool = True) -> GameArena:
    """Game in which Defender wins iff ``atm`` accepts the empty input.

    Information sets encode configurations: one position per tape cell, each
    carrying the head position, state and scanned symbol.  Intruder's
    deviating moves lead to safe positions from which he cannot win.
    """
    atm.check()
    if check_halting:
        check_atm_halts(atm)
    n, B, Q = atm.n, atm.tape_alphabet, atm.states
    cells = range(1, n + 1)
    g0, g_choice, g_L, g_R = "g0", "g_choice", "g_L", "g_R"
    choice_actions = (FORALL_L, FORALL_R, EXISTS)
    sigma = choice_actions + B
    positions = ["v0", SAFE_L, SAFE_R, SAFE_CHOICE]
    obs = {"v0": g0, SAFE_L: g_L, SAFE_R: g_R, SAFE_CHOICE: g_choice}
    delta: dict[str, dict[str, tuple[str, ...]]] = {
        "v0": {a: tuple(atm_position(h, atm.blank, 1, atm.initial, atm.blank, "choice") for h in cells) for a in sigma},
        SAFE_CHOICE: {a: (SAFE_L, SAFE_R) for a in choice_actions},
        SAFE_L: {b: (SAFE_CHOICE,) for b in B},
        SAFE_R: {b: (SAFE_CHOICE,) for b in B},
    }
    provenance: dict[str, object] = {"v0": "start", SAFE_L: "safe", SAFE_R: "safe", SAFE_CHOICE: "safe"}
    secrets = set()
    phase_obs = {"L": g_L, "R": g_R, "choice": g_choice}
    for h in cells:
        for b in B:
            for i in cells:
                for q in Q:
                    for b2 in B:
                        for f in PHASES:
                            v = atm_position(h, b, i, q, b2, f)
                            positions.append(v)
                            obs[v] = phase_obs[f]
                            provenance[v] = {"cell": h, "symbol": b, "head": i, "state": q, "scanned": b2, "phase": f}
                            if f == "choice":
                                delta[v] = _choice_moves(atm, h, b, i, q, b2)
                                if q == atm.reject_state:
                                    secrets.add(v)
                            else:
                                delta[v] = _direction_moves(atm, h, b, i, q, b2, f)
    return GameArena(
        positions=positions,
        alphabet=sigma,
        obs=obs,
        act={g0: sigma, g_choice: choice_actions, g_L: B, g_R: B},
        delta=delta,
        initial="v0",
        secrets=frozenset(secrets),
        observations=(g0, g_choice, g_L, g_R),
        provenance=provenance,
    )


def _choice_moves(atm: Atm, h, b, i, q, b2) -> dict[str, tuple[str, ...]]:
    kind = atm.kinds[q]
    out = {}
    for a in (FORALL_L, FORALL_R, EXISTS):
        if a == EXISTS and kind == "exists":
            out[a] = (atm_position(h, b, i, q, b2, "L"), atm_position(h, b, i, q, b2, "R"))
        elif a == FORALL_L and kind == "forall":
            out[a] = (atm_position(h, b, i, q, b2, "L"),)
        elif a == FORALL_R and kind == "forall":
            out[a] = (atm_position(h, b, i, q, b2, "R"),)
        else:
            out[a] = (SAFE_L, SAFE_R)
    return out


def _direction_moves(atm: Atm, h, b, i, q, b2, f) -> dict[str, tuple[str, ...]]:
    if atm.is_terminal(q):
        return {a: (atm_position(h, b, i, q, b2, "choice"),) for a in atm.tape_alphabet}
    q_next, written, theta = atm.delta[q, b2][0 if f == "L" else 1]
    j = i + theta
    out = {}
    for a in atm.tape_alphabet:
        if not 1 <= j <= atm.n:
            # head would leave the tape; never reached on machines passing check_atm_halts
            out[a] = (SAFE_CHOICE,)
        elif h not in (i, j):
            out[a] = (atm_position(h, b, j, q_next, a, "choice"),)
        elif h == i:
            out[a] = (atm_position(h, written, j, q_next, a, "choice"),)
        elif a == b:
            out[a] = (atm_position(h, b, j, q_next, b, "choice"),)
        else:
            out[a] = (SAFE_CHOICE,)
    return out


def atm_game_size(atm: Atm) -> int:
    n, nb, nq = atm.n, len(atm.tape_alphabet), len(atm.kinds)
    return 4 + n * nb * n * nq * nb * 3


# ---------------------------------------------------------------------------
# discrete-event systems

class UnextendableTraceError(InputError):
    code = "unextendable-observable-trace"


@dataclass(frozen=True)
class DesProblem:
    """Is ``secret`` opaque w.r.t. the traces of ``system`` for an observer of ``observable``?"""

    system: Lts
    secret: Dfa
    observable: tuple[str, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "observable", tuple(self.observable))

    def check(self) -> None:
        self.system.check()
        self.secret.check()
        if set(self.secret.alphabet) != set(self.system.alphabet):
            raise InputError("the secret DFA must be over the events of the system")
        if not self.secret.complete:
            raise InputError("the secret DFA must be complete")
        unknown = set(self.observable) - set(self.system.alphabet)
        if unknown:
            raise InputError(f"observable events {sorted(unknown)} are not events of the system")

    def to_dict(self) -> dict:
        return {"system": self.system.to_dict(), "secret": self.secret.to_dict(), "observable": list(self.observable)}

    @classmethod
    def from_dict(cls, data: Mapping) -> "DesProblem":
        _check_keys(data, ("system", "secret", "observable"), "DES problem")
        problem = cls(Lts.from_dict(data["system"]), Dfa.from_dict(data["secret"]), data["observable"])
        problem.check()
        return problem


def product_state(g: str, p: str) -> str:
    return f"({g},{p})"


def synchronized_product(problem: DesProblem) -> Dfa:
    """Reachable part of the system synchronised with the secret DFA.

    Traces are those of the system; accepted words are the secret traces.
    """
    problem.check()
    G, phi = problem.system, problem.secret
    start = (G.initial, phi.initial)
    seen = {start: product_state(*start)}
    queue = deque([start])
    delta: dict[str, dict[str, str]] = {}
    while queue:
        g, p = queue.popleft()
        row = delta.setdefault(seen[g, p], {})
        for a in G.alphabet:
            g2 = G.step(g, a)
            if g2 is None:
                continue
            nxt = (g2, phi.step(p, a))
            if nxt not in seen:
                seen[nxt] = product_state(*nxt)
                queue.append(nxt)
            row[a] = seen[nxt]
    return Dfa(
        states=tuple(seen.values()),
        alphabet=G.alphabet,
        delta=delta,
        initial=seen[start],
        accepting=frozenset(name for (g, p), name in seen.items() if p in phi.accepting),
    )


def epsilon_closure(dfa: Dfa, observable: Iterable[str]) -> Nfa:
    """Observer automaton: unobservable events become ε-moves, then are closed away."""
    observable = tuple(a for a in dfa.alphabet if a in set(observable))
    hidden = tuple(a for a in dfa.alphabet if a not in observable)

    def close(qs: Iterable[str]) -> tuple[str, ...]:
        found = dict.fromkeys(qs)
        stack = list(found)
        while stack:
            q = stack.pop()
            for e in hidden:
                t = dfa.step(q, e)
                if t is not None and t not in found:
                    found[t] = None
                    stack.append(t)
        return tuple(q for q in dfa.states if q in found)

    closures = {q: close([q]) for q in dfa.states}
    delta = {}
    for q in dfa.states:
        delta[q] = {}
        for y in observable:
            targets = (dfa.step(p, y) for p in closures[q])
            delta[q][y] = close(t for t in targets if t is not None)
    return Nfa(dfa.states, observable, delta, closures[dfa.initial], dfa.accepting)


TICK = "tick"
NOTHING_SEEN = "ε"


def des_position(q: str, x: str) -> str:
    return f"{q}/{x}"


def des_to_game(problem: DesProblem) -> GameArena:
    """Passive-Intruder game whose opacity-verify answer is the DES opacity answer.

    Position ``q/x`` means the system is in product state ``q`` and the last
    observed event was ``x``; Intruder only ever sees ``x``.
    """
    product = synchronized_product(problem)
    observer = epsilon_closure(product, problem.observable)
    if NOTHING_SEEN in observer.alphabet:
        raise InputError(f"event name {NOTHING_SEEN!r} is reserved")
    for q in observer.states:
        if not any(observer.step(q, y) for y in observer.alphabet):
            raise UnextendableTraceError(
                f"unextendable-observable-trace: no observable event can follow state {q}"
            )
    init = "init"  # every other position contains a slash
    labels = (NOTHING_SEEN,) + observer.alphabet
    positions = [init]
    positions += [des_position(q, NOTHING_SEEN) for q in observer.initial]
    positions += [des_position(q, x) for q in observer.states for x in observer.alphabet]

    def moves(q: str) -> tuple[str, ...]:
        return tuple(des_position(t, y) for y in observer.alphabet for t in observer.step(q, y))

    delta = {init: {TICK: tuple(des_position(q, NOTHING_SEEN) for q in observer.initial)}}
    obs = {init: NOTHING_SEEN}
    provenance: dict[str, object] = {init: "start"}
    secrets = set()
    for q in observer.initial:
        v = des_position(q, NOTHING_SEEN)
        delta[v] = {TICK: moves(q)}
        obs[v] = NOTHING_SEEN
        provenance[v] = {"state": q, "last_observed": None}
        if q in product.accepting:
            secrets.add(v)
    for q in observer.states:
        for x in observer.alphabet:
            v = des_position(q, x)
            delta[v] = {TICK: moves(q)}
            obs[v] = x
            provenance[v] = {"state": q, "last_observed": x}
            if q in product.accepting:
                secrets.add(v)
    return GameArena(
        positions=positions,
        alphabet=(TICK,),
        obs=obs,
        act={x: (TICK,) for x in labels},
        delta=delta,
        initial=init,
        secrets=frozenset(secrets),
        observations=labels,
        provenance=provenance,
    )
