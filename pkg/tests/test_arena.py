import json
import random
from dataclasses import replace

import pytest
from hypothesis import given, settings, strategies as st

from opacity_games.arena import (
    GameArena,
    PlayPrefix,
    arena_to_json,
    available_actions,
    infoset_of_prefix,
    infoset_trace,
    initial_infoset,
    is_opaque_prefix,
    load_arena,
    observe,
    reachable_infoset_graph,
    update_infoset,
    validate_arena,
)
from opacity_games.errors import IllegalPrefixError, InputError, UnreachableObservationError
from opacity_games.fixtures import ARENAS, fixture_path
from opacity_games.generate import random_arena

from conftest import blindfold_arenas, random_legal_prefix, small_arenas


def names(infoset):
    return set(infoset.members)


def test_fixtures_are_valid(fixtures):
    for a in fixtures.values():
        assert validate_arena(a).ok


def test_empty_successor_set_reported(fixtures):
    g1 = fixtures["G1"]
    broken = replace(g1, delta={**g1.delta, "v0": {"a": ()}})
    assert "empty-successor-set" in validate_arena(broken).codes


def test_empty_action_set_reported(fixtures):
    g1 = fixtures["G1"]
    broken = replace(g1, act={**g1.act, "g0": ()})
    assert "empty-action-set" in validate_arena(broken).codes


def test_other_violations():
    base = dict(
        positions=["v0", "s"], alphabet=["a"], obs={"v0": "g", "s": "g"},
        act={"g": ["a"]}, delta={"v0": {"a": ["s"]}, "s": {"a": ["s"]}},
        initial="v0", secrets=["s"],
    )
    assert validate_arena(GameArena(**base)).ok
    assert "initial-not-position" in validate_arena(GameArena(**{**base, "initial": "x"})).codes
    assert "secret-not-position" in validate_arena(GameArena(**{**base, "secrets": ["x"]})).codes
    assert "missing-transition" in validate_arena(GameArena(**{**base, "delta": {"v0": {"a": ["s"]}}})).codes
    unused = {"v0": {"a": ["s"], "b": ["s"]}, "s": {"a": ["s"]}}
    codes = validate_arena(GameArena(**{**base, "alphabet": ["a", "b"], "delta": unused})).codes
    assert "unused-transition" in codes
    assert "unknown-position" in validate_arena(GameArena(**{**base, "delta": {"v0": {"a": ["z"]}, "s": {"a": ["s"]}}})).codes
    assert "missing-observation" in validate_arena(GameArena(**{**base, "obs": {"v0": "g"}})).codes


def test_invalid_arena_refuses_to_compile(fixtures):
    g1 = fixtures["G1"]
    broken = replace(g1, delta={**g1.delta, "v0": {"a": ()}})
    with pytest.raises(InputError):
        broken.compiled


def test_available_actions(fixtures):
    assert available_actions(fixtures["G1"], "v0") == ("a",)
    assert set(available_actions(fixtures["G4"], "h")) == {"gh", "gt"}
    assert available_actions(fixtures["G4"], "h") == available_actions(fixtures["G4"], "t")


def test_initial_infoset(fixtures):
    for name in ("G1", "G4", "B1"):
        assert names(initial_infoset(fixtures[name])) == {"v0"}


def test_update_infoset(fixtures):
    g2 = fixtures["G2"]
    assert names(update_infoset(g2, initial_infoset(g2), "a", "g1")) == {"s"}
    b2 = fixtures["B2"]
    assert names(update_infoset(b2, initial_infoset(b2), "b", "g")) == {"x", "y"}
    with pytest.raises(UnreachableObservationError):
        update_infoset(g2, initial_infoset(g2), "a", "g0")
    with pytest.raises(IllegalPrefixError):
        update_infoset(b2, initial_infoset(b2), "c", "g")


def test_infoset_of_prefix(fixtures):
    assert names(infoset_of_prefix(fixtures["G1"], PlayPrefix.parse("v0 a s"))) == {"s", "n"}
    assert names(infoset_of_prefix(fixtures["G2"], PlayPrefix.parse("v0 a n a n"))) == {"n"}
    for a in fixtures.values():
        assert names(infoset_of_prefix(a, PlayPrefix(a.initial))) == {a.initial}


def test_illegal_prefixes_are_rejected(fixtures):
    g2 = fixtures["G2"]
    for text in ("v0 a v0", "s a n", "v0 b s", "v0 a q"):
        with pytest.raises(IllegalPrefixError):
            infoset_of_prefix(g2, PlayPrefix.parse(text))
    with pytest.raises(InputError):
        PlayPrefix.parse("v0 a")


def test_is_opaque_prefix(fixtures):
    assert not is_opaque_prefix(fixtures["G3"], PlayPrefix.parse("v0 a s"))
    assert is_opaque_prefix(fixtures["G1"], PlayPrefix.parse("v0 a s a n"))
    trace = infoset_trace(fixtures["G1"], PlayPrefix.parse("v0 a s a n"))
    assert [names(i) for i in trace] == [{"v0"}, {"s", "n"}, {"s", "n"}]


def test_no_secrets_means_every_prefix_opaque():
    rng = random.Random(5)
    for _ in range(50):
        a = random_arena(rng.randint(1, 6), 2, 3, rng, secret_ratio=0.0)
        assert is_opaque_prefix(a, random_legal_prefix(a, 6, rng))


def test_reachable_infoset_graph(fixtures):
    g1 = reachable_infoset_graph(fixtures["G1"])
    assert [names(n) for n in g1.nodes] == [{"v0"}, {"s", "n"}]
    sn = g1.nodes[1]
    assert (("a", "g1"), sn) in g1.edges[sn]
    g2 = reachable_infoset_graph(fixtures["G2"])
    assert [names(n) for n in g2.nodes] == [{"v0"}, {"s"}, {"n"}]


def test_perfect_observation_graph_matches_position_graph():
    rng = random.Random(3)
    for _ in range(30):
        n = rng.randint(1, 6)
        a = random_arena(n, 2, 1, rng)
        a = replace(a, obs={v: v for v in a.positions}, act={v: a.alphabet for v in a.positions},
                    observations=a.positions,
                    delta={v: {x: a.delta[v].get(x) or a.delta[v][a.act[a.obs[v]][0]] for x in a.alphabet}
                           for v in a.positions})
        reach = {a.initial}
        stack = [a.initial]
        while stack:
            v = stack.pop()
            for ts in a.delta[v].values():
                for t in ts:
                    if t not in reach:
                        reach.add(t)
                        stack.append(t)
        graph = reachable_infoset_graph(a)
        assert all(len(node) == 1 for node in graph.nodes)
        assert {node.members[0] for node in graph.nodes} == reach


@pytest.mark.parametrize("name", ARENAS)
def test_canonical_files_round_trip(name, tmp_path):
    original = fixture_path(name).read_text(encoding="utf-8")
    a = load_arena(fixture_path(name))
    assert arena_to_json(a) == original
    out = tmp_path / "again.json"
    out.write_text(arena_to_json(a), encoding="utf-8")
    assert load_arena(out) == a


def test_unknown_keys_rejected(tmp_path):
    data = json.loads(fixture_path("G1").read_text())
    data["colour"] = "red"
    p = tmp_path / "x.json"
    p.write_text(json.dumps(data))
    with pytest.raises(InputError):
        load_arena(p)
    p.write_text("{not json")
    with pytest.raises(InputError):
        load_arena(p)


def test_provenance_survives_round_trip(fixtures):
    a = GameArena.from_dict({**fixtures["G1"].to_dict(), "provenance": {"seed": 7}})
    assert GameArena.from_dict(json.loads(arena_to_json(a))).provenance == {"seed": 7}
    assert a == fixtures["G1"]


def test_last_position_is_in_its_infoset():
    rng = random.Random(11)
    for a in small_arenas(200, seed=11):
        prefix = random_legal_prefix(a, rng.randint(0, 8), rng)
        infoset = infoset_of_prefix(a, prefix)
        assert prefix.last in infoset


def test_infosets_nonempty_and_inside_one_class():
    rng = random.Random(12)
    for a in small_arenas(200, seed=12):
        for infoset in infoset_trace(a, random_legal_prefix(a, 8, rng)):
            assert len(infoset) > 0
            assert len({a.obs[v] for v in infoset}) == 1


def test_infoset_depends_only_on_observations():
    rng = random.Random(13)
    checked = 0
    for a in small_arenas(300, seed=13):
        seen = {}
        for _ in range(30):
            prefix = random_legal_prefix(a, rng.randint(0, 5), rng)
            key = observe(a, prefix)
            infoset = infoset_of_prefix(a, prefix)
            if key in seen:
                assert seen[key] == infoset
                checked += 1
            seen[key] = infoset
    assert checked > 100


def test_graph_size_bound_and_blindfold_images():
    for a in small_arenas(200, seed=14):
        assert len(reachable_infoset_graph(a)) <= 2 ** len(a.positions)
    for a in blindfold_arenas(100, seed=14):
        graph = reachable_infoset_graph(a)
        # access words by breadth-first search over the graph
        word = {graph.nodes[0]: ()}
        for node in graph.nodes:
            for (act, _), nxt in graph.edges[node]:
                word.setdefault(nxt, word[node] + (act,))
        for node, w in word.items():
            image = {a.initial}
            for x in w:
                image = {t for v in image for t in a.delta[v][x]}
            assert names(node) == image


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 10_000), n=st.integers(1, 6), k=st.integers(1, 3), m=st.integers(1, 3))
def test_random_arenas_valid_and_round_trip(seed, n, k, m):
    a = random_arena(n, k, m, seed)
    assert validate_arena(a).ok
    assert GameArena.from_dict(json.loads(arena_to_json(a))) == a
