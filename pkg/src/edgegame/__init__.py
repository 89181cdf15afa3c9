"""Two-community directed edge-formation game: simulation and analysis."""

from .blockmodel import (
    BlockProbabilityMatrix,
    StrategyPair,
    block_matrix,
    sample_adjacency,
    sample_snapshot,
)
from .dynamics import (
    MyopicReport,
    Protocol,
    ProtocolConfig,
    SemiMarkovChain,
    TraceRecord,
    run_protocol,
    step_semi_markov,
    verify_myopic_optimality,
    write_trace_csv,
)
from .game import (
    EquilibriumResult,
    PlayerRole,
    Regime,
    best_response,
    cross_partial,
    expected_utility_base,
    expected_utility_rec,
    iterated_dominance,
    nash_equilibrium,
    realized_utility_base,
    realized_utility_rec,
    realized_utility_rec_all,
)
from .graph import (
    DirectedGraph,
    d_indicator,
    inter_edge_count,
    s_indicator,
    segregation_measure,
    segregation_value,
    two_hop_count,
)
from .opinion import (
    OpinionConfig,
    OpinionRecord,
    OpinionState,
    init_geometric_graph,
    run_opinion,
    step_opinion,
    tail_mean_segregation,
)
from .recommender import (
    RecommendationOutcome,
    RecommenderConfig,
    recommendation_probability,
    run_recommender,
)
from .seeding import child_seed, substream

__all__ = [
    "BlockProbabilityMatrix",
    "DirectedGraph",
    "EquilibriumResult",
    "MyopicReport",
    "OpinionConfig",
    "OpinionRecord",
    "OpinionState",
    "PlayerRole",
    "Protocol",
    "ProtocolConfig",
    "RecommendationOutcome",
    "RecommenderConfig",
    "Regime",
    "SemiMarkovChain",
    "StrategyPair",
    "TraceRecord",
    "best_response",
    "block_matrix",
    "child_seed",
    "cross_partial",
    "d_indicator",
    "expected_utility_base",
    "expected_utility_rec",
    "init_geometric_graph",
    "inter_edge_count",
    "iterated_dominance",
    "nash_equilibrium",
    "realized_utility_base",
    "realized_utility_rec",
    "realized_utility_rec_all",
    "recommendation_probability",
    "run_opinion",
    "run_protocol",
    "run_recommender",
    "s_indicator",
    "sample_adjacency",
    "sample_snapshot",
    "segregation_measure",
    "segregation_value",
    "step_opinion",
    "step_semi_markov",
    "substream",
    "tail_mean_segregation",
    "two_hop_count",
    "verify_myopic_optimality",
    "write_trace_csv",
]
