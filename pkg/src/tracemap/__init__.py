"""Simulated traceroute-like exploration of graphs.

Sources probe targets along shortest paths; the union of the probed paths is
the sampled graph, compared here against the underlying graph and against
mean-field predictions built on betweenness centrality.
"""

__version__ = "0.1.0"

from .centrality import (
    BetweennessTable,
    DisconnectedGraphError,
    betweenness_by_degree,
    brandes_betweenness,
    brute_force_betweenness,
    sum_rule_residual,
)
from .explorer import (
    MonteCarloResult,
    Placement,
    PlacementError,
    ProbeBudget,
    SampledGraph,
    monte_carlo_exploration,
    place_low_betweenness,
    place_random,
    run_exploration,
)
from .generators import (
    DegreeDistributionSpec,
    GenerationError,
    generate_configuration_model,
    generate_er,
    is_graphical,
    sample_degree_sequence,
)
from .graph import (
    Graph,
    GraphError,
    build_graph,
    degree_histogram,
    induced_subgraph,
    is_connected,
    largest_connected_component,
)
from .paths import Psc, bfs_dag, select_paths
from .theory import predict

__all__ = [
    "BetweennessTable", "DisconnectedGraphError", "betweenness_by_degree",
    "brandes_betweenness", "brute_force_betweenness", "sum_rule_residual",
    "MonteCarloResult", "Placement", "PlacementError", "ProbeBudget", "SampledGraph",
    "monte_carlo_exploration", "place_low_betweenness", "place_random", "run_exploration",
    "DegreeDistributionSpec", "GenerationError", "generate_configuration_model",
    "generate_er", "is_graphical", "sample_degree_sequence",
    "Graph", "GraphError", "build_graph", "degree_histogram", "induced_subgraph",
    "is_connected", "largest_connected_component",
    "Psc", "bfs_dag", "select_paths", "predict",
]
