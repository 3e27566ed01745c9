"""Nash-equilibrium secrecy rates for source vs jammer-relay games."""

from .analytic import (
    EquilibriumReport,
    MixedStrategy,
    solve_case_a_general,
    solve_case_a_k0,
    solve_case_d,
    solve_case_e,
    solve_case_n,
    solve_problem1,
    solve_unknown_codebook,
    solve_2x2,
)
from .channel import NetworkConfig, SnrSet, compute_snrs, gain_from_polar
from .informed import (
    InformedOutcome,
    JammerPolicy,
    check_special_cases,
    grid_minimize,
    secrecy_rate,
    solve_informed,
)
from .matrixgame import LpSolution, MatrixGame, discretize, error_bound, solve_lp
from .montecarlo import PlayStats, audit_deviations, play, sample_strategy
from .regions import CaseLabel, CornerPoints, classify, corner_points, payoff
from .reduction import ReducedGame, reduce_game, reduced_kernel

__all__ = [
    "NetworkConfig",
    "SnrSet",
    "compute_snrs",
    "gain_from_polar",
    "CornerPoints",
    "CaseLabel",
    "corner_points",
    "classify",
    "payoff",
    "ReducedGame",
    "reduce_game",
    "reduced_kernel",
    "MatrixGame",
    "LpSolution",
    "discretize",
    "solve_lp",
    "error_bound",
    "MixedStrategy",
    "EquilibriumReport",
    "solve_case_a_k0",
    "solve_case_a_general",
    "solve_case_d",
    "solve_case_e",
    "solve_2x2",
    "solve_case_n",
    "solve_unknown_codebook",
    "solve_problem1",
    "JammerPolicy",
    "InformedOutcome",
    "secrecy_rate",
    "check_special_cases",
    "grid_minimize",
    "solve_informed",
    "PlayStats",
    "play",
    "sample_strategy",
    "audit_deviations",
]

__version__ = "0.1.0"
