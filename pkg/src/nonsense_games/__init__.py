"""Semantic games for infectious logics (BH3, BH4, BH-n) and the Logic of Paradox."""

from .errors import (
    AlienValue,
    BudgetExceeded,
    GameSemanticsError,
    Indeterminate,
    MissingChoice,
    NonTerminal,
    NotYourTurn,
    NoWinningStrategy,
    ParseError,
    Terminal,
    UnboundAtom,
)
from .formula import And, Atom, Not, Or, atoms, depth, parse, subformulas, to_string
from .game import Position, SemanticGame, build_positions, build_token_sets, step_run, terminal_winners
from .logics import (
    Falsifier,
    LogicSpec,
    Role,
    TruthValue,
    Verifier,
    chain_logic,
    derive_table,
    eval_oracle,
    get_logic,
    is_designated,
    lp_logic,
    parse_valuation,
    read_valuation_file,
)
from .solver import (
    EliminationTrace,
    Strategy,
    brute_force_profile,
    extract_strategy,
    iesds,
    solve_value,
    win_profile,
)

__all__ = [name for name in dir() if not name.startswith("_")]
