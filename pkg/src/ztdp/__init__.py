"""Polynomial-space counting on graphs and hypergraphs.

Counts perfect matchings, matchings by size, set covers / dominating sets
and l-packings by dynamic programming over modified nice tree
decompositions, evaluated recursively in the zeta-transform domain so only
a root-to-leaf path of rank vectors is ever live.  Ships balanced
decomposition constructors, a grid path-decomposition baseline, an
exponential-space table baseline and brute-force oracles.
"""

from .algebra import (
    MAX_GROUND,
    AlgebraError,
    IntegerRing,
    PolynomialRing,
    Relaxation,
    SetFunction,
    canonical_relaxation,
    mobius,
    pointwise_product,
    ranked_union_convolve,
    subset_convolve,
    union_product,
    zeta,
)
from .decomp import (
    NODE_AUX,
    NODE_FORGET,
    NODE_INTRODUCE,
    NODE_INTRODUCE_EDGE,
    NODE_JOIN,
    NODE_LEAF,
    DecompositionError,
    DecompositionMetrics,
    GridRegion,
    MNDNode,
    ModifiedNiceDecomposition,
    TreeDecomposition,
    ValidationReport,
    balanced_td,
    bfs_layer_separator,
    format_tree_decomposition,
    grid_balanced_td,
    grid_path_decomposition,
    grid_separator,
    make_grid_separator_oracle,
    metrics,
    mnd_from_json,
    mnd_to_json,
    parse_tree_decomposition,
    single_bag_decomposition,
    to_modified_nice,
    trivial_separator,
    validate,
)
from .engine import (
    EngineError,
    EngineInvariantError,
    EvalStats,
    ProblemSpec,
    TableLimitError,
    count_l_packings,
    count_perfect_matchings,
    count_set_covers,
    evaluate,
    matching_polynomial,
    matching_polynomial_spec,
    packing_spec,
    perfect_matching_spec,
    set_cover_spec,
    table_dp_evaluate,
)
from .graphs import (
    Graph,
    GraphError,
    GridSpec,
    Hypergraph,
    closed_neighborhood_hypergraph,
    file_comments,
    format_graph,
    format_hypergraph,
    graph_as_hypergraph,
    grid_graph,
    make_graph,
    make_hypergraph,
    parse_graph,
    parse_hypergraph,
    primal_graph,
)
from .oracle import (
    BudgetError,
    OracleBudget,
    bf_l_packings,
    bf_matchings_by_size,
    bf_perfect_matchings,
    bf_set_covers,
    exact_tree_depth,
)
