"""Imputation of unknown constraint rows from feasible observations."""

from feasregion.imputation.compactness import (
    compactness_candidates,
    greedy_compactness_rows,
    observation_lower_bounds,
)
from feasregion.imputation.joint import JointModel, build_joint_model, default_big_m, solve_stages
from feasregion.imputation.known_set import assemble_region, build_known_set
from feasregion.imputation.losses import (
    evaluate_loss,
    finalize,
    impute,
    impute_adherence,
    impute_adjacency,
    impute_combined,
    impute_compactness,
    impute_fairness,
    impute_indifference,
    impute_single_point,
)
from feasregion.imputation.reduced import (
    SignClasses,
    interchangeable_rows,
    joint_binary_count,
    pooled_compactness,
    solve_fairness_classes,
)

__all__ = [
    "JointModel",
    "SignClasses",
    "assemble_region",
    "build_joint_model",
    "build_known_set",
    "compactness_candidates",
    "default_big_m",
    "evaluate_loss",
    "finalize",
    "greedy_compactness_rows",
    "impute",
    "impute_adherence",
    "impute_adjacency",
    "impute_combined",
    "impute_compactness",
    "impute_fairness",
    "impute_indifference",
    "impute_single_point",
    "interchangeable_rows",
    "joint_binary_count",
    "observation_lower_bounds",
    "pooled_compactness",
    "solve_fairness_classes",
    "solve_stages",
]
