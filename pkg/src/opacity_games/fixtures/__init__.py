"""Small reference instances shipped with the package."""
from importlib.resources import files

ARENAS = ("G1", "G2", "G3", "G4", "B1", "B2")


def fixture_path(name: str):
    return files(__name__) / f"{name}.json"


def arena(name: str):
    from ..arena import load_arena

    return load_arena(fixture_path(name))


def nfa(name: str):
    from ..reductions import load_nfa

    return load_nfa(fixture_path(name))


def des(name: str):
    from ..arena import read_json
    from ..reductions import DesProblem

    return DesProblem.from_dict(read_json(fixture_path(name)))


def atm(name: str):
    from ..arena import read_json
    from ..reductions import Atm

    return Atm.from_dict(read_json(fixture_path(name)))
