"""Symmetric equilibrium of the n-player fixed-mean highest-realization game.

Players each pick a distribution on [0, 1] with mean ``mu``; the highest
realization wins, ties split evenly. This package solves the symmetric
equilibrium and checks it three ways: exact deviation payoffs, a grid
best-response oracle, and seeded Monte Carlo tournaments.
"""

from maxgame.types import (
    ATOM,
    AtomOne,
    Continuous,
    ConvergenceFailure,
    DiscreteDistribution,
    DistributionError,
    DomainError,
    GameConfig,
    InsufficientPoints,
    MaxGameError,
    MuOutOfRange,
    NoDeviationFound,
    NOutOfRange,
    Realization,
    discrete_mean,
    validate_config,
)
from maxgame.solver import (
    EquilibriumStrategy,
    Regime,
    cdf,
    discretize,
    quantile,
    solve,
    solve_atom,
    sweep,
)
from maxgame.payoff import (
    WinCurve,
    deviation_payoff,
    tie_split_closed,
    tie_split_sum,
    win_curve_vs_discrete,
    win_curve_vs_equilibrium,
)
from maxgame.oracle import (
    BestResponseReport,
    EnvelopePoint,
    ShiftedCandidate,
    best_response,
    concave_envelope,
    interior_atom_profile,
    refute_profile,
    shifted_candidate,
    verify_equilibrium,
)
from maxgame.montecarlo import (
    SimulationReport,
    empirical_deviation_payoff,
    empirical_mean_check,
    run_tournament,
)

__version__ = "0.1.0"
