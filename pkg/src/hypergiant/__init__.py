"""Simulation and verification toolkit for giant components in random
d-uniform hypergraphs.

The package solves the fixed-point equations behind the giant component
fraction and its fluctuation constants, samples the binomial model
exactly, explores components with interchangeable graph/streaming
backends, and runs seeded Monte Carlo experiments that compare the
empirical fluctuations against the theory.
"""

from .components import ComponentSummary, component_of_set, connected_components, size_histogram_csv
from .exploration import (
    ExplorationConfig,
    ExplorationTrace,
    decompose,
    deterministic_x,
    explore_graph,
    explore_stream,
    trace_csv,
    trace_summary,
)
from .rng import RngStream
from .sampling import (
    Hypergraph,
    count_subsets,
    hgr_to_string,
    log_count_subsets,
    read_hgr,
    sample_binomial,
    sample_hypergraph,
    sample_k_subset,
    write_hgr,
)
from .theory import (
    ModelParams,
    RegimeReport,
    TheoryConstants,
    clt_variance,
    dual_branching_rate,
    edge_probability,
    giant_fraction,
    pair_giant_fraction,
    rate_gaussian,
    rate_giant,
    validate_regime,
    variance_constant,
    variance_constant_discrete,
)

__version__ = "0.1.0"

__all__ = [
    "ComponentSummary",
    "ExplorationConfig",
    "ExplorationTrace",
    "Hypergraph",
    "ModelParams",
    "RegimeReport",
    "RngStream",
    "TheoryConstants",
    "clt_variance",
    "component_of_set",
    "connected_components",
    "count_subsets",
    "decompose",
    "deterministic_x",
    "dual_branching_rate",
    "edge_probability",
    "explore_graph",
    "explore_stream",
    "giant_fraction",
    "hgr_to_string",
    "log_count_subsets",
    "pair_giant_fraction",
    "rate_gaussian",
    "rate_giant",
    "read_hgr",
    "sample_binomial",
    "sample_hypergraph",
    "sample_k_subset",
    "size_histogram_csv",
    "trace_csv",
    "trace_summary",
    "validate_regime",
    "variance_constant",
    "variance_constant_discrete",
    "write_hgr",
    "__version__",
]
