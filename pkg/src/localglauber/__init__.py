"""Local Glauber dynamics: simulator, exact verifier, coupling toolkit, bounds."""

from .analysis import (
    ContractionReport,
    GammaOptimum,
    combined_bound,
    delta_wrapup,
    mixing_bound,
    optimize_gamma,
    path_bound,
    v0_bound,
)
from .coupling import (
    AdjacentPair,
    ContractionEstimate,
    CoupledStep,
    CouplingLayers,
    ProposalMode,
    ProposalPair,
    assign_coupled_proposals,
    check_flip_path_lemmas,
    classify_nodes,
    contraction_experiment,
    coupled_step,
    hamming_distance,
    sample_adjacent_pair,
)
from .dynamics import (
    DEFAULT_SEED,
    ChainConfig,
    RoundRandomness,
    RoundStats,
    apply_proposals,
    draw_round_randomness,
    effective_proposal,
    effective_proposals,
    greedy_coloring,
    is_proper,
    local_glauber_step,
    random_coloring,
    run_chain,
    run_chain_trace,
    sequential_glauber_step,
    zeros_coloring,
)
from .errors import (
    InfeasibleError,
    ParameterError,
    ParseError,
    ResourceLimitError,
    ValidationError,
)
from .exact import (
    CheckReport,
    MixingResult,
    StateSpace,
    TVCurve,
    build_transition_matrix,
    check_absorption,
    check_detailed_balance,
    check_irreducibility,
    check_row_stochastic,
    check_uniform_stationary,
    enumerate_proper_colorings,
    exact_mixing_time,
    improper_mass_curve,
    stationary_uniform,
    symmetry_reduced_starts,
    tv_curve,
    tv_distance,
)
from .graph import Graph, cycle_automorphisms, generate, neighbors_inclusive, parse_edge_list

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
