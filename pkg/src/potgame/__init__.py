"""Equilibria of sender-receiver communication games and the price of transparency."""

__version__ = "0.1.0"

from .bimatrix import EquilibriumTuple, enumerate_extreme_equilibria, verify_equilibrium_tuple
from .game import (
    BeliefOutcome,
    CommGame,
    expected_receiver_payoff,
    expected_sender_payoff,
    parse_game,
    posterior_from_structure,
    structure_from_posterior,
)
from .persuasion import PersuasionSolution, concavify_binary, solve_op, u_hat
from .pot import PotReport, check_strict_competitive, compute_pot, construct_competitive_instance, solve_matrix_game
from .tsb import (
    Sense,
    TsbSolution,
    assemble_pbe,
    babbling_pbe,
    check_belief_dominance,
    check_pbe,
    search_verified_pbe,
    solve_cs,
    solve_tsb,
)

__all__ = [
    "BeliefOutcome",
    "CommGame",
    "EquilibriumTuple",
    "PersuasionSolution",
    "PotReport",
    "Sense",
    "TsbSolution",
    "assemble_pbe",
    "babbling_pbe",
    "check_belief_dominance",
    "check_pbe",
    "check_strict_competitive",
    "compute_pot",
    "concavify_binary",
    "construct_competitive_instance",
    "enumerate_extreme_equilibria",
    "expected_receiver_payoff",
    "expected_sender_payoff",
    "parse_game",
    "posterior_from_structure",
    "search_verified_pbe",
    "solve_cs",
    "solve_matrix_game",
    "solve_op",
    "solve_tsb",
    "structure_from_posterior",
    "u_hat",
    "verify_equilibrium_tuple",
]
