import random
from dataclasses import replace
from itertools import product

import pytest

from opacity_games.arena import PlayPrefix, infoset_of_prefix, initial_infoset, update_infoset, validate_arena
from opacity_games.blindfold import is_blindfold
from opacity_games.errors import InputError
from opacity_games.arena import read_json
from opacity_games.fixtures import atm, des, fixture_path, nfa
from opacity_games.generate import random_arena, random_atm, random_des, random_nfa
from opacity_games.opacity import decide_opacity_guarantee, decide_opacity_verify, decide_opacity_violate
from opacity_games.oracle import _estimate, atm_accepts, des_opaque_by_enumeration, nfa_universal_determinize
from opacity_games.reductions import (
    NOTHING_SEEN,
    SAFE_CHOICE,
    SAFE_L,
    SAFE_R,
    TICK,
    Atm,
    Dfa,
    DesProblem,
    Lts,
    Nfa,
    ReachGame,
    UnextendableTraceError,
    atm_code,
    atm_game_size,
    atm_to_game,
    check_atm_halts,
    des_position,
    des_to_game,
    epsilon_closure,
    initial_configuration,
    nfa_to_blindfold_game,
    product_state,
    reach_to_opacity,
    successor_configuration,
    synchronized_product,
)


# reachability games

def test_reach_without_targets(fixtures):
    rg = ReachGame(fixtures["G1"], frozenset())
    a = reach_to_opacity(rg)
    assert a.secrets == frozenset()
    assert not decide_opacity_violate(a).verdict


def test_reach_all_observations_targeted():
    for seed in range(20):
        arena = random_arena(5, 2, 3, seed)
        a = reach_to_opacity(ReachGame(arena, frozenset(arena.observations)))
        assert a.secrets == frozenset(a.positions)
        assert decide_opacity_violate(a).verdict


def test_reach_fixture():
    rg = ReachGame.from_dict(read_json(fixture_path("R1")))
    assert decide_opacity_violate(reach_to_opacity(rg)).verdict


def test_reach_unknown_target(fixtures):
    with pytest.raises(InputError):
        reach_to_opacity(ReachGame(fixtures["G1"], frozenset({"nope"})))


# NFA universality

def test_universal_nfa_fixture():
    game = nfa_to_blindfold_game(nfa("A1"))
    assert decide_opacity_verify(game).verdict


def test_epsilon_rejected_gives_counterexample_at_round_one():
    rng = random.Random(61)
    found = 0
    while found < 20:
        A = random_nfa(rng.randint(1, 5), 2, rng)
        if set(A.initial) & A.accepting:
            continue
        found += 1
        d = decide_opacity_verify(nfa_to_blindfold_game(A))
        assert not d.verdict and len(d.counterexample) == 1


def test_counterexample_word_is_rejected():
    rng = random.Random(62)
    for _ in range(100):
        A = random_nfa(3, 2, rng)
        d = decide_opacity_verify(nfa_to_blindfold_game(A))
        assert d.verdict == nfa_universal_determinize(A)
        if not d.verdict:
            assert not A.accepts(d.counterexample.actions[1:])


def test_nfa_game_shape():
    rng = random.Random(63)
    for _ in range(50):
        A = random_nfa(rng.randint(1, 5), 2, rng)
        game = nfa_to_blindfold_game(A)
        assert is_blindfold(game) and validate_arena(game).ok
        assert len(game.positions) == len(A.states) + 1


def test_incomplete_nfa_rejected():
    A = Nfa(["q1"], ["a", "b"], {"q1": {"a": ["q1"]}}, ["q1"], ["q1"])
    with pytest.raises(InputError):
        nfa_to_blindfold_game(A)


def test_nfa_infosets_follow_subset_construction():
    rng = random.Random(64)
    for _ in range(200):
        A = random_nfa(rng.randint(1, 5), 2, rng)
        game = nfa_to_blindfold_game(A)
        prefix = PlayPrefix(game.initial)
        for _ in range(rng.randint(1, 7)):
            x = rng.choice(A.alphabet)
            prefix = prefix.extend(x, rng.choice(game.delta[prefix.last][x]))
        word = prefix.actions[1:]
        assert set(infoset_of_prefix(game, prefix).members) == A.image(A.initial, word)


# alternating Turing machines

def test_atm_fixtures():
    acc, rej = atm("M_acc"), atm("M_rej")
    game = atm_to_game(acc)
    assert len(game.positions) == 85 == atm_game_size(acc)
    assert decide_opacity_guarantee(game).verdict
    assert not decide_opacity_guarantee(atm_to_game(rej)).verdict
    assert validate_arena(game).ok


def test_size_formula_on_random_machines():
    for seed in range(10):
        m = random_atm(seed, n=3, symbols=2, inner_states=2)
        assert len(atm_to_game(m).positions) == atm_game_size(m)


def test_first_round_is_choice_code_of_initial_configuration():
    for m in (atm("M_acc"), atm("M_rej"), random_atm(3)):
        game = atm_to_game(m)
        code = atm_code(m, initial_configuration(m), "choice")
        for a in game.act[game.obs["v0"]]:
            assert set(update_infoset(game, initial_infoset(game), a, "g_choice").members) == code


def test_codes_along_non_deviating_plays():
    rng = random.Random(65)
    machines = [atm("M_acc"), atm("M_rej")] + [random_atm(s, n=3, symbols=2, inner_states=2) for s in range(10)]
    for m in machines:
        game = atm_to_game(m)
        for _ in range(20):
            config = initial_configuration(m)
            infoset = update_infoset(game, initial_infoset(game), "exists", "g_choice")
            while m.kinds[config[0]] not in ("accept", "reject"):
                if m.kinds[config[0]] == "exists":
                    action, side = "exists", rng.choice("LR")
                else:
                    side = rng.choice("LR")
                    action = "forall_" + side
                infoset = update_infoset(game, infoset, action, "g_" + side)
                assert set(infoset.members) == atm_code(m, config, side)
                config = successor_configuration(m, config, side)
                q, i, tape = config
                infoset = update_infoset(game, infoset, tape[i - 1], "g_choice")
                assert set(infoset.members) == atm_code(m, config, "choice")


def test_safe_positions_are_absorbing():
    for m in (atm("M_acc"), random_atm(1), random_atm(2, n=3)):
        game = atm_to_game(m)
        safe = {SAFE_L, SAFE_R, SAFE_CHOICE}
        for v in safe:
            for targets in game.delta[v].values():
                assert set(targets) <= safe
            assert v not in game.secrets


def test_atm_reduction_matches_simulation():
    for seed in range(40):
        m = random_atm(seed, n=2 + seed % 2, symbols=2, inner_states=2)
        assert decide_opacity_guarantee(atm_to_game(m)).verdict == atm_accepts(m)


def test_non_halting_machines_rejected():
    loop = Atm(["_"], "_", {"q0": "exists", "q1": "exists", "acc": "accept", "rej": "reject"}, "q0",
               {("q0", "_"): (("q1", "_", 1), ("q1", "_", 1)), ("q1", "_"): (("q0", "_", -1), ("q0", "_", -1))}, 2)
    with pytest.raises(InputError):
        check_atm_halts(loop)
    with pytest.raises(InputError):
        atm_to_game(loop)
    off = Atm(["_"], "_", {"q0": "exists", "acc": "accept", "rej": "reject"}, "q0",
              {("q0", "_"): (("acc", "_", -1), ("acc", "_", -1))}, 2)
    with pytest.raises(InputError):
        check_atm_halts(off)
    assert len(atm_to_game(off, check_halting=False).positions) == atm_game_size(off)


# discrete-event systems

def test_product_of_d1():
    product = synchronized_product(des("D1"))
    assert len(product.states) == 4
    assert product.accepting == {product_state("g1", "p1"), product_state("g3", "p1")}


def test_product_extreme_secrets():
    d1 = des("D1")
    phi = d1.secret
    never = replace(d1, secret=replace(phi, accepting=frozenset()))
    always = replace(d1, secret=replace(phi, accepting=frozenset(phi.states)))
    assert synchronized_product(never).accepting == frozenset()
    p = synchronized_product(always)
    assert p.accepting == frozenset(p.states)
    assert decide_opacity_verify(des_to_game(never)).verdict


def test_closure_with_everything_observable():
    d1 = des("D1")
    product = synchronized_product(d1)
    obs = epsilon_closure(product, product.alphabet)
    assert obs.initial == (product.initial,)
    for q in product.states:
        for a in product.alphabet:
            t = product.step(q, a)
            assert obs.step(q, a) == ((t,) if t else ())


def test_closure_with_nothing_observable():
    product = synchronized_product(des("D1"))
    obs = epsilon_closure(product, [])
    assert set(obs.initial) == set(product.states)
    assert obs.alphabet == ()


def test_closure_of_d1():
    product = synchronized_product(des("D1"))
    obs = epsilon_closure(product, ["o"])
    q00, q11, q20, q31 = (product_state(*p) for p in (("g0", "p0"), ("g1", "p1"), ("g2", "p0"), ("g3", "p1")))
    assert set(obs.initial) == {q00, q11}
    assert set(obs.step(q00, "o")) == {q20, q31}
    assert set(obs.step(q11, "o")) == {q31}
    assert set(obs.step(q20, "o")) == {q20}


def test_des_fixtures():
    assert decide_opacity_verify(des_to_game(des("D1"))).verdict
    assert not decide_opacity_verify(des_to_game(des("D2"))).verdict


def test_deadlocked_observer_rejected():
    system = Lts(["g0", "g1"], ["o", "u"], {"g0": {"o": "g1"}, "g1": {"u": "g1"}}, "g0")
    phi = Dfa(["p"], ["o", "u"], {"p": {"o": "p", "u": "p"}}, "p", [])
    with pytest.raises(UnextendableTraceError) as err:
        des_to_game(DesProblem(system, phi, ["o"]))
    assert err.value.code == "unextendable-observable-trace"


def observer_words(problem, length):
    for n in range(length + 1):
        yield from product(problem.observable, repeat=n)


@pytest.mark.parametrize("name", ["D1", "D2"])
def test_observer_estimates_match_trace_enumeration(name):
    problem = des(name)
    observer = epsilon_closure(synchronized_product(problem), problem.observable)
    for word in observer_words(problem, 4):
        expected = {product_state(*s) for s in _estimate(problem, word)}
        assert set(observer.image(observer.initial, word)) == expected


@pytest.mark.parametrize("name", ["D1", "D2"])
def test_game_infosets_match_observer(name):
    problem = des(name)
    game = des_to_game(problem)
    observer = epsilon_closure(synchronized_product(problem), problem.observable)
    plays = [PlayPrefix(game.initial)]
    for _ in range(6):
        plays = [p.extend(TICK, w) for p in plays for w in game.delta[p.last][TICK]]
        for p in plays:
            seen = [game.obs[v] for v in p.positions[2:]]
            last = seen[-1] if seen else NOTHING_SEEN
            states = observer.image(observer.initial, seen)
            assert set(infoset_of_prefix(game, p).members) == {des_position(q, last) for q in states}


def test_des_reduction_matches_enumeration():
    for seed in range(60):
        problem = random_des(seed)
        n = len(synchronized_product(problem).states)
        expected = des_opaque_by_enumeration(problem, bound=2 ** n)
        assert decide_opacity_verify(des_to_game(problem)).verdict == expected
