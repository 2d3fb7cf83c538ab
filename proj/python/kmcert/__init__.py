"""k-means optimality certification: clustering, subsample SDP lower bounds,
and Monte Carlo confidence certificates."""

from ._core import (
    Dataset,
    __version__,
    baseline_bound_sample,
    brute_force_kmeans,
    certified_sdp_lower_bound,
    certify,
    certify_baseline,
    confidence_lower_bound,
    decompose_distance_matrix,
    dsquared_seed,
    kmeans_objective,
    kmeanspp,
    lloyd,
    load_csv,
    load_idx,
    p_value,
    partition_to_feasible_X,
    sample_symmetric_pair,
    save_csv,
    seminorm_F,
    solve_sdp,
    squared_distance_matrix,
    subsample,
    test_statistic,
    theorem2_params,
)

__all__ = [
    "Dataset",
    "__version__",
    "baseline_bound_sample",
    "brute_force_kmeans",
    "certified_sdp_lower_bound",
    "certify",
    "certify_baseline",
    "confidence_lower_bound",
    "decompose_distance_matrix",
    "dsquared_seed",
    "kmeans_objective",
    "kmeanspp",
    "lloyd",
    "load_csv",
    "load_idx",
    "p_value",
    "partition_to_feasible_X",
    "sample_symmetric_pair",
    "save_csv",
    "seminorm_F",
    "solve_sdp",
    "squared_distance_matrix",
    "subsample",
    "test_statistic",
    "theorem2_params",
]
