"""Two-player 2x2 games played through 16-entry joint-probability boxes.

The box is the full table of outcome probabilities for an EPR-style
experiment with two measurement settings per side.  This package validates
such tables, completes them from their free coordinates, tests whether four
independent biased coins could have produced them, evaluates Bell
quantities, enumerates Nash equilibria of games whose payoffs are read off
the table, replays frozen analysis scenarios, estimates payoffs by seeded
Monte Carlo, and samples constrained boxes in search of non-classical
equilibria.
"""

from ._kernels import available_backends, backend
from .epr_game import (
    AnalysisReport,
    ConstraintSet,
    LinearConstraint,
    OmegaCoefficients,
    analyze,
    constraint_satisfied,
    epr_block_payoffs,
    linear_constraint,
    mu_form_gains,
    nash_inequality_residuals,
    omega_coefficients,
)
from .game_core import (
    BlockPayoffs,
    EquilibriumSet,
    PayoffMatrix,
    PayoffPair,
    Segment,
    StrategyProfile,
    block_payoffs_classical,
    deviation_margins,
    enumerate_equilibria,
    equilibrium_set_distance,
    is_equilibrium,
    mixed_payoffs,
    payoff_two_coin,
)
from .games_catalog import (
    SCENARIOS,
    ClassicalSolution,
    DeltaParams,
    GameFamily,
    ReproductionReport,
    chicken,
    classical_equilibria,
    coin_witness,
    constraint_set_for,
    constraint_targets,
    deltas,
    detect_family,
    prisoners_dilemma,
    reproduce,
    sh_quantum_candidates,
    stag_hunt,
)
from .montecarlo import EmpiricalEstimate, PlayConfig, sample_outcome, simulate
from .probability_box import (
    ALICE_1,
    ALICE_2,
    BOB_1,
    BOB_2,
    DEPENDENT_INDICES,
    FREE_INDICES,
    BoxValidationError,
    CHExtreme,
    CoinProfile,
    FreeBlock,
    InvalidFreeBlockError,
    JointBox,
    NotFactorizable,
    Setting,
    ValidationReport,
    cereceda_index,
    ch_xi_bound,
    chsh_correlation_sum,
    clauser_horne_value,
    complete_from_free,
    correlators,
    factorize,
    free_block,
    from_coins,
    marginals,
    max_ch_violation,
    maximal_violation_box,
    named_box,
    no_signaling_rows,
    uniform_box,
    validate,
)
from .search import (
    InfeasibleConstraintError,
    SampledBoxes,
    SearchConfig,
    SearchHit,
    sample_boxes,
    scan_for_new_equilibria,
)
from .serialize import SchemaError, dumps, load_box, load_game, parse_box, parse_game

__version__ = "0.1.0"

__all__ = [
    "ALICE_1",
    "ALICE_2",
    "AnalysisReport",
    "BOB_1",
    "BOB_2",
    "BlockPayoffs",
    "BoxValidationError",
    "CHExtreme",
    "ClassicalSolution",
    "CoinProfile",
    "ConstraintSet",
    "DEPENDENT_INDICES",
    "DeltaParams",
    "EmpiricalEstimate",
    "EquilibriumSet",
    "FREE_INDICES",
    "FreeBlock",
    "GameFamily",
    "InfeasibleConstraintError",
    "InvalidFreeBlockError",
    "JointBox",
    "LinearConstraint",
    "NotFactorizable",
    "OmegaCoefficients",
    "PayoffMatrix",
    "PayoffPair",
    "PlayConfig",
    "ReproductionReport",
    "SCENARIOS",
    "SampledBoxes",
    "SchemaError",
    "SearchConfig",
    "SearchHit",
    "Segment",
    "Setting",
    "StrategyProfile",
    "ValidationReport",
    "analyze",
    "available_backends",
    "backend",
    "block_payoffs_classical",
    "cereceda_index",
    "ch_xi_bound",
    "chicken",
    "chsh_correlation_sum",
    "classical_equilibria",
    "clauser_horne_value",
    "coin_witness",
    "complete_from_free",
    "constraint_satisfied",
    "constraint_set_for",
    "constraint_targets",
    "correlators",
    "deltas",
    "detect_family",
    "deviation_margins",
    "dumps",
    "enumerate_equilibria",
    "epr_block_payoffs",
    "equilibrium_set_distance",
    "factorize",
    "free_block",
    "from_coins",
    "is_equilibrium",
    "linear_constraint",
    "load_box",
    "load_game",
    "marginals",
    "max_ch_violation",
    "maximal_violation_box",
    "mixed_payoffs",
    "mu_form_gains",
    "named_box",
    "nash_inequality_residuals",
    "no_signaling_rows",
    "omega_coefficients",
    "parse_box",
    "parse_game",
    "payoff_two_coin",
    "prisoners_dilemma",
    "reproduce",
    "sample_boxes",
    "sample_outcome",
    "scan_for_new_equilibria",
    "sh_quantum_candidates",
    "simulate",
    "stag_hunt",
    "uniform_box",
    "validate",
]
