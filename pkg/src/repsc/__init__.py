"""Representation-aware spectral clustering.

Spectral graph clustering in which every node's representatives, as given
by an auxiliary representation graph, must end up spread across clusters in
proportion to cluster sizes. The package provides the constrained and
unconstrained algorithms, the random graph model used to study them, exact
expected-case spectra, fairness and quality metrics, multiplex-network
ingestion, and a deterministic experiment harness.
"""

from .clustering import (
    ClusteringResult,
    KMeansConfig,
    kmeans,
    nrepsc,
    nrepsc_approx,
    nsc,
    urepsc,
    urepsc_approx,
    usc,
)
from .constraint import (
    BalanceReport,
    build_indicator_h,
    build_indicator_t,
    linear_constraint_norm,
    node_balance,
    representation_residual,
)
from .errors import (
    AssumptionViolatedError,
    ConfigError,
    DegreeRangeError,
    DivisibilityError,
    EigenConvergenceError,
    EmptyClusterError,
    IndexOutOfRangeError,
    IsolatedNodeError,
    KTooLargeError,
    LayerOutOfRangeError,
    MalformedLineError,
    NoLayersError,
    NonSquareError,
    NotPositiveDefiniteError,
    NotSymmetricError,
    NullSpaceTooSmallError,
    RankTooLargeError,
    RepscError,
    SizeMismatchError,
    ZeroGapError,
    ZeroVolumeClusterError,
)
from .experiments import (
    ExperimentConfig,
    ExperimentResult,
    check_expected,
    fair_sc_baseline,
    load_config,
    parse_config_text,
    run_experiment,
)
from .graphs import (
    ClusterAssignment,
    Graph,
    RppParams,
    build_d_regular_rep_graph,
    contiguous_assignment,
    expected_adjacency,
    read_assignment,
    read_graph,
    sample_planted_partition_rep_graph,
    sample_rpp,
    validate_regular_representation,
    write_assignment,
    write_graph,
)
from .linalg import (
    EigenDecomposition,
    low_rank_approx,
    null_space_basis,
    sqrt_and_inv_sqrt,
    sym_eig,
)
from .metrics import (
    PartitionScore,
    accuracy_nodes,
    mistake_fraction,
    normalized_cut,
    ratio_cut,
    score_partition,
)
from .multiplex import (
    MultiplexNetwork,
    aggregate_layers,
    drop_isolated_nodes,
    knn_layer_graph,
    layer_positions_for_id_range,
    load_node_names,
    parse_multiplex,
)
from .theory import (
    BoundShape,
    ExpectedSpectrum,
    canonical_y_vectors,
    closed_form_eigenvalues,
    expected_case_inputs,
    expected_spectrum,
    misclustering_bound_shape,
)

__version__ = "0.1.0"

__all__ = [
    "AssumptionViolatedError",
    "BalanceReport",
    "BoundShape",
    "ClusterAssignment",
    "ClusteringResult",
    "ConfigError",
    "DegreeRangeError",
    "DivisibilityError",
    "EigenConvergenceError",
    "EigenDecomposition",
    "EmptyClusterError",
    "ExpectedSpectrum",
    "ExperimentConfig",
    "ExperimentResult",
    "Graph",
    "IndexOutOfRangeError",
    "IsolatedNodeError",
    "KMeansConfig",
    "KTooLargeError",
    "LayerOutOfRangeError",
    "MalformedLineError",
    "MultiplexNetwork",
    "NoLayersError",
    "NonSquareError",
    "NotPositiveDefiniteError",
    "NotSymmetricError",
    "NullSpaceTooSmallError",
    "PartitionScore",
    "RankTooLargeError",
    "RepscError",
    "RppParams",
    "SizeMismatchError",
    "ZeroGapError",
    "ZeroVolumeClusterError",
    "accuracy_nodes",
    "aggregate_layers",
    "build_d_regular_rep_graph",
    "build_indicator_h",
    "build_indicator_t",
    "canonical_y_vectors",
    "check_expected",
    "closed_form_eigenvalues",
    "contiguous_assignment",
    "drop_isolated_nodes",
    "expected_adjacency",
    "expected_case_inputs",
    "expected_spectrum",
    "fair_sc_baseline",
    "kmeans",
    "knn_layer_graph",
    "layer_positions_for_id_range",
    "linear_constraint_norm",
    "load_config",
    "load_node_names",
    "low_rank_approx",
    "misclustering_bound_shape",
    "mistake_fraction",
    "node_balance",
    "normalized_cut",
    "nrepsc",
    "nrepsc_approx",
    "nsc",
    "null_space_basis",
    "parse_config_text",
    "parse_multiplex",
    "ratio_cut",
    "read_assignment",
    "read_graph",
    "representation_residual",
    "run_experiment",
    "sample_planted_partition_rep_graph",
    "sample_rpp",
    "score_partition",
    "sqrt_and_inv_sqrt",
    "sym_eig",
    "urepsc",
    "urepsc_approx",
    "usc",
    "validate_regular_representation",
    "write_assignment",
    "write_graph",
]
