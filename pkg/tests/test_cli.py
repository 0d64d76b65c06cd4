import json
import shutil
import subprocess
import sys

import pytest

from opacity_games.arena import load_arena
from opacity_games.fixtures import ARENAS, fixture_path

TABLE = {
    "G1": (False, True, True),
    "G2": (False, True, False),
    "G3": (True, False, False),
    "G4": (False, False, False),
    "B1": (True, False, False),
    "B2": (False, True, True),
}
PROBLEMS = ("violate", "guarantee", "verify")


def run(*args, stdin=""):
    proc = subprocess.run(
        [sys.executable, "-m", "opacity_games", *map(str, args)],
        input=stdin, capture_output=True, text=True, timeout=120,
    )
    return proc


def result(proc):
    return json.loads(proc.stdout)


@pytest.mark.parametrize("name", ARENAS)
def test_exit_codes_match_verdicts(name):
    for problem, expected in zip(PROBLEMS, TABLE[name]):
        proc = run("solve", "--problem", problem, fixture_path(name))
        assert proc.returncode == (0 if expected else 1), proc.stderr
        out = result(proc)
        assert out["verdict"] is expected
        assert out["stats"]["wall_seconds"] >= 0


def test_guarantee_emits_witness(tmp_path):
    w = tmp_path / "w.json"
    proc = run("solve", "--problem", "guarantee", "--witness", w, fixture_path("G2"))
    assert proc.returncode == 0
    assert result(proc)["witness"] == str(w)
    check = run("check-strategy", "--role", "defender", fixture_path("G2"), w)
    assert check.returncode == 0 and result(check)["verdict"]


def test_verify_counterexample():
    proc = run("solve", "--problem", "verify", fixture_path("G2"))
    assert proc.returncode == 1
    assert result(proc)["counterexample"] == "v0 a s"


def test_intruder_witness_checks(tmp_path):
    w = tmp_path / "w.json"
    assert run("solve", "--problem", "violate", "--witness", w, fixture_path("B1")).returncode == 0
    assert run("check-strategy", "--role", "intruder", fixture_path("B1"), w).returncode == 0
    assert run("check-strategy", "--role", "intruder", fixture_path("B2"), w).returncode == 1
    assert run("check-strategy", "--role", "defender", fixture_path("B1"), w).returncode == 2


def test_oracle_flag():
    out = result(run("solve", "--problem", "guarantee", "--oracle", fixture_path("G4")))
    assert out["oracle"] is False and out["verdict"] is False


def test_directory_batch(tmp_path):
    for name in ARENAS:
        shutil.copy(fixture_path(name), tmp_path / f"{name}.json")
    proc = run("solve", "--problem", "violate", tmp_path)
    assert proc.returncode == 1
    verdicts = {r["file"].rsplit("/", 1)[-1][:-5]: r["verdict"] for r in result(proc)["results"]}
    assert verdicts == {name: TABLE[name][0] for name in ARENAS}
    (tmp_path / "junk.json").write_text("{}")
    assert run("solve", "--problem", "violate", tmp_path).returncode == 2


def test_reduce_then_solve(tmp_path):
    game = tmp_path / "game.json"
    assert run("reduce", "nfa-universality", fixture_path("A1"), "--out", game).returncode == 0
    assert run("solve", "--problem", "verify", game).returncode == 0
    assert run("reduce", "des", fixture_path("D2"), "--out", game).returncode == 0
    assert run("solve", "--problem", "verify", game).returncode == 1
    assert run("reduce", "atm", fixture_path("M_acc"), "--out", game).returncode == 0
    assert len(load_arena(game).positions) == 85
    assert run("solve", "--problem", "guarantee", game).returncode == 0
    assert run("reduce", "reach", fixture_path("R1"), "--out", game).returncode == 0
    assert run("solve", "--problem", "violate", game).returncode == 0


def test_validate():
    assert run("validate", fixture_path("G1")).returncode == 0


def test_validate_reports_violations(tmp_path):
    data = json.loads(fixture_path("G1").read_text())
    data["delta"]["v0"]["a"] = []
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(data))
    proc = run("validate", bad)
    assert proc.returncode == 1
    assert "empty-successor-set" in [v["code"] for v in result(proc)["violations"]]
    assert run("solve", "--problem", "verify", bad).returncode == 2


def test_input_errors(tmp_path):
    assert run("solve", "--problem", "verify", tmp_path / "missing.json").returncode == 2
    broken = tmp_path / "broken.json"
    broken.write_text("{")
    assert run("solve", "--problem", "verify", broken).returncode == 2
    assert run("solve", "--problem", "nonsense", fixture_path("G1")).returncode == 2
    assert run().returncode == 2
    assert run("reduce", "atm", fixture_path("A1"), "--out", tmp_path / "x.json").returncode == 2


def test_random_arena_is_seeded_and_valid(tmp_path):
    args = ("random-arena", "--positions", 6, "--actions", 2, "--observations", 3, "--seed", 9)
    first, second = run(*args), run(*args)
    assert first.returncode == 0 and first.stdout == second.stdout
    data = json.loads(first.stdout)
    assert data["provenance"]["seed"] == 9
    out = tmp_path / "r.json"
    assert run(*args, "--out", out).returncode == 0
    assert out.read_text() == first.stdout
    assert run("validate", out).returncode == 0


@pytest.mark.parametrize("name", ARENAS)
def test_round_trip_byte_identical(name, tmp_path):
    from opacity_games.arena import save_arena

    out = tmp_path / "copy.json"
    save_arena(load_arena(fixture_path(name)), out)
    assert out.read_bytes() == fixture_path(name).read_bytes()


def test_play_as_intruder_hides_positions():
    proc = run("play", "--as", "intruder", "--max-rounds", 3, fixture_path("G1"), stdin="a\na\na\n")
    assert proc.returncode == 0
    *dialogue, final = proc.stderr.strip().split("\n")
    arena = load_arena(fixture_path("G1"))
    for line in dialogue:
        words = set(line.replace(">", " ").split())
        assert not words & (set(arena.positions) - {arena.initial}), line
    assert "v0 a" in final  # the actual play is revealed only at the end
    summary = result(proc)
    assert summary["rounds"] == 3 and summary["bad_round"] is None
    assert summary["observations"] == ["g0", "g1", "g1", "g1"]


def test_play_reports_bad_round():
    proc = run("play", "--as", "intruder", fixture_path("G3"), stdin="a\n")
    assert proc.returncode == 1
    assert result(proc)["bad_round"] == 1
    proc = run("play", "--as", "intruder", fixture_path("B1"), stdin="a\nb\n")
    assert proc.returncode == 0 and result(proc)["aborted"]
    proc = run("play", "--as", "intruder", fixture_path("B1"), stdin="b\n")
    assert result(proc)["bad_round"] == 1


def test_play_as_defender(tmp_path):
    proc = run("play", "--as", "defender", "--max-rounds", 4, fixture_path("G2"), stdin="n\nn\nn\nn\n")
    assert proc.returncode == 0 and result(proc)["play"] == "v0 a n a n a n a n"
    proc = run("play", "--as", "defender", fixture_path("G2"), stdin="0\n")
    assert proc.returncode == 1 and result(proc)["play"] == "v0 a s"
    w = tmp_path / "w.json"
    run("solve", "--problem", "violate", "--witness", w, fixture_path("B1"))
    proc = run("play", "--as", "defender", "--against", w, fixture_path("B1"), stdin="y\n")
    assert result(proc)["bad_round"] == 1
    assert run("play", "--as", "intruder", "--against", w, fixture_path("B1"), stdin="a\n").returncode == 2
