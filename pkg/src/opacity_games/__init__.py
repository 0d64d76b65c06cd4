"""Games with opacity condition: deciders, strategy synthesis and reductions."""
from .arena import (
    GameArena,
    InformationSet,
    PlayPrefix,
    ValidationReport,
    available_actions,
    infoset_of_prefix,
    initial_infoset,
    is_opaque_prefix,
    load_arena,
    reachable_infoset_graph,
    save_arena,
    update_infoset,
    validate_arena,
)
from .blindfold import BlindfoldOutcome, is_blindfold, solve_blindfold
from .errors import (
    GuardExceeded,
    IllegalPrefixError,
    InputError,
    OpacityGameError,
    PreconditionError,
    StrategyError,
    UnreachableObservationError,
)
from .opacity import (
    Decision,
    MealyStrategy,
    Role,
    check_defender_strategy,
    check_intruder_strategy,
    decide_opacity_guarantee,
    decide_opacity_verify,
    decide_opacity_violate,
    lift_defender_strategy,
    lift_intruder_strategy,
    load_strategy,
    save_strategy,
    simulate_play,
)
from .pi_solver import SolveResult, attractor, solve
from .powerset import Mode, PerfectInfoGame, Player, build_guarantee_game, build_violate_game

__version__ = "0.1.0"
