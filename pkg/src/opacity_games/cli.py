"""Command-line front end: ``opacity-games SUBCOMMAND ...``.

Exit status: 0 when the checked property holds, 1 when it fails, 2 on
usage or input errors.  Structured results go to stdout as JSON, human
readable text to stderr.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from . import oracle
from .arena import (
    GameArena,
    arena_to_json,
    dumps_json,
    load_arena,
    read_json,
    validate_arena,
)
from .errors import GuardExceeded, OpacityGameError
from .generate import random_arena
from .opacity import (
    Role,
    defender_move,
    intruder_action,
    intruder_update,
    check_defender_strategy,
    check_intruder_strategy,
    decide_opacity_guarantee,
    decide_opacity_verify,
    decide_opacity_violate,
    load_strategy,
    save_strategy,
)
from .reductions import (
    Atm,
    DesProblem,
    ReachGame,
    atm_to_game,
    des_to_game,
    load_nfa,
    nfa_to_blindfold_game,
    reach_to_opacity,
)

HOLDS, FAILS, INPUT_ERROR = 0, 1, 2

DECIDERS = {
    "violate": decide_opacity_violate,
    "guarantee": decide_opacity_guarantee,
    "verify": decide_opacity_verify,
}
ORACLES = {
    "violate": oracle.oracle_violate,
    "guarantee": oracle.oracle_guarantee,
    "verify": oracle.oracle_verify,
}


class UsageError(Exception):
    pass


def _emit(args, result: dict, text: str) -> None:
    if args.format == "json":
        sys.stdout.write(json.dumps(result, indent=2, ensure_ascii=False) + "\n")
    else:
        sys.stdout.write(text + "\n")
    if text and args.format == "json" and not args.quiet:
        sys.stderr.write(text + "\n")


def _status(verdict: bool) -> int:
    return HOLDS if verdict else FAILS


# ---------------------------------------------------------------------------
# validate

def cmd_validate(args) -> int:
    arena = load_arena(args.game)
    report = validate_arena(arena)
    result = {
        "command": "validate",
        "file": str(args.game),
        "verdict": report.ok,
        "violations": [{"code": v.code, "message": v.message} for v in report.violations],
    }
    text = f"{args.game}: ok" if report.ok else f"{args.game}: invalid\n{report}"
    _emit(args, result, text)
    return _status(report.ok)


# ---------------------------------------------------------------------------
# solve

def _solve_one(path: Path, problem: str, witness_out: Path | None, with_oracle: bool) -> dict:
    started = time.perf_counter()
    arena = load_arena(path)
    decision = DECIDERS[problem](arena)
    result = {
        "command": "solve",
        "file": str(path),
        "problem": problem,
        "verdict": decision.verdict,
        "witness": None,
        "counterexample": str(decision.counterexample) if decision.counterexample else None,
        "stats": dict(decision.stats),
    }
    if decision.witness is not None:
        if witness_out is not None:
            save_strategy(decision.witness, witness_out)
            result["witness"] = str(witness_out)
        result["strategy"] = decision.witness.to_dict()
    if with_oracle:
        try:
            result["oracle"] = ORACLES[problem](arena)
        except GuardExceeded as exc:
            result["oracle"] = None
            result["oracle_skipped"] = str(exc)
    result["stats"]["wall_seconds"] = time.perf_counter() - started
    return result


def _solve_guarded(path: Path, problem: str, with_oracle: bool) -> dict:
    try:
        return _solve_one(path, problem, None, with_oracle)
    except OpacityGameError as exc:
        return {"command": "solve", "file": str(path), "problem": problem, "error": str(exc)}


def _solve_text(r: dict) -> str:
    if "error" in r:
        return f"{r['file']}: error: {r['error']}"
    line = f"{r['file']}: {r['problem']} {'holds' if r['verdict'] else 'fails'}"
    if r["counterexample"]:
        line += f"; counterexample: {r['counterexample']}"
    if r["witness"]:
        line += f"; witness written to {r['witness']}"
    if "oracle" in r:
        line += f"; oracle: {r['oracle']}"
    return line


def cmd_solve(args) -> int:
    target = Path(args.game)
    if target.is_dir():
        if args.witness:
            raise UsageError("--witness is not supported when solving a directory")
        files = sorted(target.glob("*.json"))
        with ThreadPoolExecutor() as pool:
            results = list(pool.map(lambda p: _solve_guarded(p, args.problem, args.oracle), files))
        _emit(args, {"command": "solve", "results": results}, "\n".join(_solve_text(r) for r in results))
        if any("error" in r for r in results):
            return INPUT_ERROR
        return _status(all(r["verdict"] for r in results))
    witness = Path(args.witness) if args.witness else None
    r = _solve_one(target, args.problem, witness, args.oracle)
    _emit(args, r, _solve_text(r))
    return _status(r["verdict"])


# ---------------------------------------------------------------------------
# check-strategy

def cmd_check_strategy(args) -> int:
    arena = load_arena(args.game)
    strategy = load_strategy(args.strategy)
    if args.role == "defender":
        decision = check_defender_strategy(arena, strategy)
    else:
        decision = check_intruder_strategy(arena, strategy)
    result = {
        "command": "check-strategy",
        "role": args.role,
        "file": str(args.game),
        "strategy": str(args.strategy),
        "verdict": decision.verdict,
        "counterexample": str(decision.counterexample) if decision.counterexample else None,
        "stats": dict(decision.stats),
    }
    text = f"{args.role} strategy {'wins' if decision.verdict else 'does not win'}"
    if decision.counterexample:
        text += f"; counterexample: {decision.counterexample}"
    _emit(args, result, text)
    return _status(decision.verdict)


# ---------------------------------------------------------------------------
# play

class _Prompt:
    """Reads choices from a stream; EOF ends the play early."""

    def __init__(self, stream, out):
        self.stream = stream
        self.out = out

    def choose(self, question: str, options: list[str]) -> str | None:
        listing = " ".join(f"[{i}] {o}" for i, o in enumerate(options))
        while True:
            self.out.write(f"{question} {listing}\n> ")
            self.out.flush()
            line = self.stream.readline()
            if not line:
                return None
            answer = line.strip()
            if answer in options:
                return answer
            if answer.isdigit() and int(answer) < len(options):
                return options[int(answer)]
            self.out.write(f"unknown choice {answer!r}\n")


def _computer_intruder(arena: GameArena, against: Path | None):
    """Step function (memory, infoset mask) -> action, plus update on observations."""
    c = arena.compiled
    strategy = load_strategy(against) if against else decide_opacity_violate(arena).witness
    if strategy is not None and strategy.role is not Role.INTRUDER:
        raise UsageError("--against must be an intruder strategy when playing defender")
    if strategy is None:
        return None, lambda m, mask: c.actions_of_mask(mask)[0], lambda m, g: m
    return (
        strategy.initial,
        lambda m, mask: intruder_action(arena, c, strategy, m, mask),
        lambda m, g: intruder_update(strategy, m, g),
    )


def _computer_defender(arena: GameArena, against: Path | None):
    c = arena.compiled
    strategy = load_strategy(against) if against else decide_opacity_guarantee(arena).witness
    if strategy is not None and strategy.role is not Role.DEFENDER:
        raise UsageError("--against must be a defender strategy when playing intruder")
    if strategy is None:
        return None, lambda m, v, a: (m, c.index[arena.delta[c.positions[v]][a][0]])
    return strategy.initial, lambda m, v, a: defender_move(arena, c, strategy, m, v, a)


def cmd_play(args) -> int:
    arena = load_arena(args.game)
    c = arena.compiled
    prompt = _Prompt(args.stdin, sys.stderr)
    say = sys.stderr.write
    v = c.initial
    mask = 1 << v
    prefix_actions: list[str] = []
    prefix_positions = [arena.initial]
    observed = [c.observations[c.obs_of[v]]]
    bad_round = 0 if c.is_bad(mask) else None
    rounds = 0
    aborted = False

    if args.role == "intruder":
        memory, defend = _computer_defender(arena, args.against)
        say(f"round 0: you observe {observed[0]}\n")
        while rounds < args.max_rounds and bad_round is None:
            a = prompt.choose("your action:", list(c.actions_of_obs[c.obs_of[v]]))
            if a is None:
                aborted = True
                break
            memory, v = defend(memory, v, a)
            mask = c.image(mask, a) & c.class_mask[c.obs_of[v]]
            rounds += 1
            g = c.observations[c.obs_of[v]]
            prefix_actions.append(a)
            prefix_positions.append(c.positions[v])
            observed.append(g)
            if c.is_bad(mask):
                bad_round = rounds
            say(f"round {rounds}: you observe {g}\n")
    else:
        memory, act, update = _computer_intruder(arena, args.against)
        say(f"round 0: position {arena.initial}, information set {c.infoset(mask)}\n")
        while rounds < args.max_rounds and bad_round is None:
            a = act(memory, mask)
            say(f"intruder plays {a}\n")
            w = prompt.choose("move to:", list(arena.delta[c.positions[v]][a]))
            if w is None:
                aborted = True
                break
            v = c.index[w]
            mask = c.image(mask, a) & c.class_mask[c.obs_of[v]]
            g = c.observations[c.obs_of[v]]
            memory = update(memory, g)
            rounds += 1
            prefix_actions.append(a)
            prefix_positions.append(w)
            observed.append(g)
            if c.is_bad(mask):
                bad_round = rounds
            say(f"round {rounds}: position {w}, information set {c.infoset(mask)}\n")

    tokens = [prefix_positions[0]]
    for a, w in zip(prefix_actions, prefix_positions[1:]):
        tokens += [a, w]
    result = {
        "command": "play",
        "as": args.role,
        "rounds": rounds,
        "aborted": aborted,
        "verdict": bad_round is None,
        "bad_round": bad_round,
        "observations": observed,
        "play": " ".join(tokens),
    }
    if bad_round is None:
        text = f"play stayed opaque for {rounds} rounds: {result['play']}"
    else:
        text = f"information set inside the secrets at round {bad_round}: {result['play']}"
    _emit(args, result, text)
    return _status(bad_round is None)


# ---------------------------------------------------------------------------
# reduce

def _reduce(kind: str, path: Path, check_halting: bool) -> GameArena:
    if kind == "nfa-universality":
        return nfa_to_blindfold_game(load_nfa(path))
    if kind == "des":
        return des_to_game(DesProblem.from_dict(read_json(path)))
    if kind == "atm":
        return atm_to_game(Atm.from_dict(read_json(path)), check_halting=check_halting)
    return reach_to_opacity(ReachGame.from_dict(read_json(path)))


def cmd_reduce(args) -> int:
    arena = _reduce(args.kind, Path(args.input), not args.no_halting_check)
    Path(args.out).write_text(arena_to_json(arena), encoding="utf-8")
    report = validate_arena(arena)
    result = {
        "command": "reduce",
        "kind": args.kind,
        "input": str(args.input),
        "out": str(args.out),
        "verdict": report.ok,
        "positions": len(arena.positions),
        "observations": len(arena.observations),
        "actions": len(arena.alphabet),
    }
    _emit(args, result, f"wrote {args.out} ({len(arena.positions)} positions)")
    return _status(report.ok)


# ---------------------------------------------------------------------------
# random-arena

def cmd_random_arena(args) -> int:
    for name in ("positions", "actions", "observations"):
        if getattr(args, name) < 1:
            raise UsageError(f"--{name} must be at least 1")
    arena = random_arena(args.positions, args.actions, args.observations, args.seed, secret_ratio=args.secret_ratio)
    provenance = {
        "generator": "random-arena",
        "seed": args.seed,
        "positions": args.positions,
        "actions": args.actions,
        "observations": args.observations,
        "secret_ratio": args.secret_ratio,
    }
    arena = GameArena.from_dict({**arena.to_dict(), "provenance": provenance})
    text = arena_to_json(arena)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        sys.stderr.write(f"wrote {args.out} (seed {args.seed})\n")
    else:
        sys.stdout.write(text)
    return HOLDS


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("-q", "--quiet", action="store_true", help="no text on stderr")

    parser = argparse.ArgumentParser(prog="opacity-games", description="Games with opacity condition.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="check an arena file")
    p.add_argument("game")
    p.set_defaults(run=cmd_validate)

    p = sub.add_parser("solve", parents=[common], help="decide violate / guarantee / verify")
    p.add_argument("--problem", choices=tuple(DECIDERS), required=True)
    p.add_argument("--witness", metavar="OUT", help="write the winning strategy here")
    p.add_argument("--oracle", action="store_true", help="also run the brute-force oracle")
    p.add_argument("game", help="arena file or directory of arena files")
    p.set_defaults(run=cmd_solve)

    p = sub.add_parser("check-strategy", parents=[common], help="check a Mealy strategy")
    p.add_argument("--role", choices=("defender", "intruder"), required=True)
    p.add_argument("game")
    p.add_argument("strategy")
    p.set_defaults(run=cmd_check_strategy)

    p = sub.add_parser("play", parents=[common], help="play interactively against a strategy")
    p.add_argument("--as", dest="role", choices=("intruder", "defender"), required=True)
    p.add_argument("--against", type=Path, help="opponent strategy (default: a computed one)")
    p.add_argument("--max-rounds", type=int, default=100)
    p.add_argument("game")
    p.set_defaults(run=cmd_play)

    p = sub.add_parser("reduce", parents=[common], help="build an opacity game from another problem")
    p.add_argument("kind", choices=("nfa-universality", "des", "atm", "reach"))
    p.add_argument("input")
    p.add_argument("--out", required=True)
    p.add_argument("--no-halting-check", action="store_true", help="atm: skip the halting check")
    p.set_defaults(run=cmd_reduce)

    p = sub.add_parser("random-arena", parents=[common], help="draw a seeded random arena")
    p.add_argument("--positions", type=int, required=True)
    p.add_argument("--actions", type=int, required=True)
    p.add_argument("--observations", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--secret-ratio", type=float, default=0.4)
    p.add_argument("--out")
    p.set_defaults(run=cmd_random_arena)
    return parser


def main(argv=None, stdin=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return INPUT_ERROR if exc.code else HOLDS
    args.stdin = stdin or sys.stdin
    try:
        return args.run(args)
    except (OpacityGameError, UsageError, OSError, json.JSONDecodeError) as exc:
        sys.stdout.write(dumps_json({"command": args.command, "error": str(exc), "type": type(exc).__name__}))
        sys.stderr.write(f"error: {exc}\n")
        return INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
